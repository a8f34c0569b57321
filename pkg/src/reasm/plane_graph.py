"""Plane graphs given by straight-line drawings, and the contractible multigraph.

A ``PlaneGraph`` is immutable: coordinates, an edge list and, per vertex, the
incident edges in clockwise order starting from the upward direction.
``PlaneMultigraph`` is the mutable working copy used while contracting; it
keeps rotation rings of darts so that faces stay well defined when parallel
edges and self-loops appear.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from functools import cmp_to_key
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    DegenerateEmbedding,
    DisconnectedContraction,
    NoEdges,
    NotSimple,
    NotThreeRegular,
    ParseError,
)

Dart = tuple[int, int]  # (edge id, side); side 0 is the edge's first endpoint

_ANGLE_EPS = 1e-12


def _cw_angle(dx: float, dy: float) -> float:
    """Clockwise angle of a direction measured from straight up, in [0, 2pi)."""
    a = (math.pi / 2 - math.atan2(dy, dx)) % (2 * math.pi)
    return 0.0 if a >= 2 * math.pi else a


def _rotation(center: tuple[float, float], spokes: list[tuple[int, tuple[float, float]]]) -> list[int]:
    """Sort ``(key, point)`` pairs clockwise around ``center`` and return the keys."""
    cx, cy = center
    items = []
    for key, (x, y) in spokes:
        dx, dy = x - cx, y - cy
        items.append((_cw_angle(dx, dy), dx, dy, key))

    def cmp(p, q) -> int:
        if abs(p[0] - q[0]) > _ANGLE_EPS:
            return -1 if p[0] < q[0] else 1
        cross = p[1] * q[2] - p[2] * q[1]
        if cross == 0:
            if p[1] * q[1] + p[2] * q[2] > 0:
                raise DegenerateEmbedding(
                    f"neighbors in the same direction around point {center}"
                )
            return -1 if p[0] < q[0] else 1
        # q clockwise of p means a negative cross product (y axis up)
        return -1 if cross < 0 else 1

    items.sort(key=cmp_to_key(cmp))
    return [it[3] for it in items]


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return (v > 0) - (v < 0)

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True

    def on_seg(a, b, c):
        return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    return (
        (o1 == 0 and on_seg(p1, p2, q1))
        or (o2 == 0 and on_seg(p1, p2, q2))
        or (o3 == 0 and on_seg(q1, q2, p1))
        or (o4 == 0 and on_seg(q1, q2, p2))
    )


@dataclass(frozen=True)
class PlaneGraph:
    """Simple plane graph with a clockwise rotation system.

    ``rings[v]`` lists the ids of the edges at ``v`` clockwise from up.
    """

    coords: tuple[tuple[float, float], ...]
    edges: tuple[tuple[int, int], ...]
    rings: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def m(self) -> int:
        return len(self.edges)

    def other(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return b if a == v else a

    def neighbors(self, v: int) -> list[int]:
        return [self.other(e, v) for e in self.rings[v]]

    def edge_index(self) -> dict[frozenset[int], int]:
        return {frozenset(uv): i for i, uv in enumerate(self.edges)}


def build_plane_graph(
    coords: Sequence[Sequence[float]],
    edges: Iterable[Sequence[int]],
    *,
    cubic: bool = True,
    check_crossings: bool = False,
) -> PlaneGraph:
    """Validate a straight-line drawing and compute its rotation system.

    With ``cubic`` set every vertex must have degree 3. ``check_crossings``
    enables a quadratic test that no two edges cross.
    """
    pts: list[tuple[float, float]] = []
    for c in coords:
        if len(c) != 2:
            raise ParseError(f"coordinate {c!r} is not a pair")
        x, y = float(c[0]), float(c[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ParseError(f"non-finite coordinate {c!r}")
        pts.append((x, y))
    if len(set(pts)) != len(pts):
        raise DegenerateEmbedding("two vertices share a position")
    n = len(pts)

    elist: list[tuple[int, int]] = []
    seen: set[frozenset[int]] = set()
    for uv in edges:
        if len(uv) != 2:
            raise ParseError(f"edge {uv!r} is not a pair")
        u, v = int(uv[0]), int(uv[1])
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge {uv!r} has an endpoint outside 0..{n - 1}")
        if u == v:
            raise NotSimple(f"self-loop at vertex {u}")
        key = frozenset((u, v))
        if key in seen:
            raise NotSimple(f"duplicate edge {u}-{v}")
        seen.add(key)
        elist.append((u, v))

    incident: list[list[int]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(elist):
        incident[u].append(i)
        incident[v].append(i)
    if cubic:
        for v, inc in enumerate(incident):
            if len(inc) != 3:
                raise NotThreeRegular(f"vertex {v} has degree {len(inc)}")

    rings = []
    for v in range(n):
        spokes = []
        for e in incident[v]:
            a, b = elist[e]
            spokes.append((e, pts[b if a == v else a]))
        rings.append(tuple(_rotation(pts[v], spokes)))

    if check_crossings:
        for i in range(len(elist)):
            a, b = elist[i]
            for j in range(i + 1, len(elist)):
                c, d = elist[j]
                if len({a, b, c, d}) < 4:
                    continue
                if _segments_cross(pts[a], pts[b], pts[c], pts[d]):
                    raise DegenerateEmbedding(f"edges {a}-{b} and {c}-{d} cross")

    return PlaneGraph(tuple(pts), tuple(elist), tuple(rings))


class EdgeKind(str, Enum):
    BOUNDING = "bounding"
    NON_BOUNDING = "non_bounding"


@dataclass(frozen=True)
class FaceWalk:
    """Closed walk of directed edge traversals ``(edge, tail, head)``."""

    steps: tuple[tuple[int, int, int], ...]

    def __len__(self) -> int:
        return len(self.steps)

    def vertices(self) -> list[int]:
        return [t for _, t, _ in self.steps]


class PlaneMultigraph:
    """Mutable plane multigraph supporting edge contraction.

    Ordinary vertices keep the ids of the source graph. Each contraction
    creates a super vertex with a fresh id; ids of absorbed vertices resolve
    to it through a union-find table, so edges keep their original endpoint
    pairs and ``owner`` maps them to the live vertex.
    """

    def __init__(self, g: PlaneGraph):
        self.n_ordinary = g.n
        self.coords = g.coords
        self.edges = g.edges
        self.alive: set[int] = set(range(g.m))
        self._parent: list[int] = list(range(g.n))
        self.rings: dict[int, list[Dart]] = {}
        for v in range(g.n):
            self.rings[v] = [(e, 0 if g.edges[e][0] == v else 1) for e in g.rings[v]]
        self.members: dict[int, list[int]] = {v: [v] for v in range(g.n)}

    # -- construction helpers -------------------------------------------------

    def copy(self) -> PlaneMultigraph:
        h = PlaneMultigraph.__new__(PlaneMultigraph)
        h.n_ordinary = self.n_ordinary
        h.coords = self.coords
        h.edges = self.edges
        h.alive = set(self.alive)
        h._parent = list(self._parent)
        h.rings = {v: list(r) for v, r in self.rings.items()}
        h.members = {v: list(ms) for v, ms in self.members.items()}
        return h

    # -- queries --------------------------------------------------------------

    def owner(self, x: int) -> int:
        p = self._parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def vertices(self) -> list[int]:
        return sorted(self.rings)

    def is_super(self, v: int) -> bool:
        return v >= self.n_ordinary

    def dart_vertex(self, d: Dart) -> int:
        return self.owner(self.edges[d[0]][d[1]])

    def ends(self, e: int) -> tuple[int, int]:
        a, b = self.edges[e]
        return self.owner(a), self.owner(b)

    def is_loop(self, e: int) -> bool:
        a, b = self.ends(e)
        return a == b

    def degree(self, v: int) -> int:
        """Number of non-loop edge endpoints at ``v``, counted with multiplicity."""
        return sum(1 for e, _ in self.rings[v] if not self.is_loop(e))

    def loops(self, v: int) -> list[int]:
        return sorted({e for e, _ in self.rings[v] if self.is_loop(e)})

    def edges_between(self, a: int, b: int) -> list[int]:
        return sorted({e for e, s in self.rings[a] if self.owner(self.edges[e][1 - s]) == b and a != b})

    def position(self, v: int) -> tuple[float, float]:
        """Upper-leftmost coordinate among the ordinary vertices inside ``v``."""
        return min((self.coords[u] for u in self.members[v]), key=lambda p: (p[0], -p[1]))

    @property
    def m(self) -> int:
        return len(self.alive)

    # -- mutation -------------------------------------------------------------

    def remove_edges(self, edge_ids: Iterable[int]) -> None:
        dead = set(edge_ids) & self.alive
        if not dead:
            return
        touched = set()
        for e in dead:
            touched.update(self.ends(e))
        for v in touched:
            self.rings[v] = [d for d in self.rings[v] if d[0] not in dead]
        self.alive -= dead

    def contract_loops(self, v: int) -> list[int]:
        """Delete every self-loop at ``v`` and return their ids."""
        lp = self.loops(v)
        self.remove_edges(lp)
        return lp

    def contract(self, edge_ids: Iterable[int]) -> int:
        """Contract a connected edge set into one new super vertex.

        Edges of the set that close a cycle are deleted outright; other edges
        that end up with both endpoints inside remain as self-loops.
        Returns the id of the new super vertex.
        """
        eset = sorted(set(edge_ids))
        if not eset:
            raise DisconnectedContraction("empty edge set")
        for e in eset:
            if e not in self.alive:
                raise DisconnectedContraction(f"edge {e} is not present")

        # connectivity of the edge set over its live endpoints
        local: dict[int, int] = {}

        def lf(x: int) -> int:
            while local.setdefault(x, x) != x:
                local[x] = local[local[x]]
                x = local[x]
            return x

        for e in eset:
            a, b = self.ends(e)
            local[lf(a)] = lf(b)
        if len({lf(x) for x in list(local)}) != 1:
            raise DisconnectedContraction("edge set does not span a connected subgraph")

        pending = set(eset)
        while pending:
            progressed = False
            for e in sorted(pending):
                a, b = self.ends(e)
                if a == b:
                    self.remove_edges([e])
                    pending.discard(e)
                    progressed = True
                    continue
                self._splice(e, a, b)
                pending.discard(e)
                progressed = True
            if not progressed:  # pragma: no cover - guarded by the check above
                raise DisconnectedContraction("contraction made no progress")

        # the survivor of all splices receives a fresh id
        a, _ = self.ends(eset[0])
        new = len(self._parent)
        self._parent.append(new)
        self._parent[a] = new
        self.rings[new] = self.rings.pop(a)
        self.members[new] = self.members.pop(a)
        return new

    def _splice(self, e: int, a: int, b: int) -> None:
        ra, rb = self.rings[a], self.rings[b]
        ia = next(i for i, d in enumerate(ra) if d[0] == e)
        ib = next(i for i, d in enumerate(rb) if d[0] == e)
        merged = ra[ia + 1:] + ra[:ia] + rb[ib + 1:] + rb[:ib]
        ma, mb = self.members[a], self.members[b]
        keep, drop = (a, b) if len(ma) >= len(mb) else (b, a)
        self.members[keep].extend(self.members.pop(drop))
        del self.rings[drop]
        self.rings[keep] = merged
        self._parent[drop] = keep
        self.alive.discard(e)

    # -- connectivity ---------------------------------------------------------

    def components(self) -> list[list[int]]:
        """Vertex sets of connected components, each sorted, ordered by min id."""
        seen: set[int] = set()
        comps = []
        for s in self.vertices():
            if s in seen:
                continue
            seen.add(s)
            comp, stack = [s], [s]
            while stack:
                v = stack.pop()
                for e, side in self.rings[v]:
                    w = self.owner(self.edges[e][1 - side])
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps


def _as_multigraph(g: PlaneGraph | PlaneMultigraph) -> PlaneMultigraph:
    return PlaneMultigraph(g) if isinstance(g, PlaneGraph) else g


def outer_face_walk(g: PlaneGraph | PlaneMultigraph, vertices: Iterable[int] | None = None) -> FaceWalk:
    """Boundary walk of the unbounded face.

    ``vertices`` restricts the start search to one component. The walk starts
    at the upper-leftmost vertex with an edge, leaves on its first edge
    clockwise from up, and at each arrival takes the next edge clockwise after
    the arrival edge; this keeps the unbounded face on the left.
    """
    h = _as_multigraph(g)
    pool = h.vertices() if vertices is None else list(vertices)
    cands = [v for v in pool if h.rings[v]]
    if not cands:
        raise NoEdges("graph has no edges")
    start = min(cands, key=lambda v: (h.position(v)[0], -h.position(v)[1], v))

    first = h.rings[start][0]
    steps: list[tuple[int, int, int]] = []
    d, v = first, start
    limit = 2 * len(h.alive) + 2
    while True:
        e, side = d
        w = h.owner(h.edges[e][1 - side])
        steps.append((e, v, w))
        ring = h.rings[w]
        i = ring.index((e, 1 - side))
        d, v = ring[(i + 1) % len(ring)], w
        if d == first and v == start:
            break
        if len(steps) > limit:  # pragma: no cover - defensive
            raise DegenerateEmbedding("face walk did not close")
    return FaceWalk(tuple(steps))


def classify_walk_edges(w: FaceWalk) -> dict[int, EdgeKind]:
    """Edges seen once on a face are bounding; edges seen twice are not."""
    count: dict[int, int] = {}
    for e, _, _ in w.steps:
        count[e] = count.get(e, 0) + 1
    return {e: EdgeKind.BOUNDING if c == 1 else EdgeKind.NON_BOUNDING for e, c in count.items()}


def all_face_walks(g: PlaneGraph | PlaneMultigraph) -> list[FaceWalk]:
    """Every face walk of ``g``; each dart is used by exactly one walk."""
    h = _as_multigraph(g)
    pos: dict[Dart, tuple[int, int]] = {}
    for v, ring in h.rings.items():
        for i, d in enumerate(ring):
            pos[d] = (v, i)
    used: set[Dart] = set()
    walks = []
    for v in h.vertices():
        for d0 in h.rings[v]:
            if d0 in used:
                continue
            steps = []
            d, at = d0, v
            while d not in used:
                used.add(d)
                e, side = d
                back = (e, 1 - side)
                w, i = pos[back]
                steps.append((e, at, w))
                ring = h.rings[w]
                d, at = ring[(i + 1) % len(ring)], w
            walks.append(FaceWalk(tuple(steps)))
    return walks


def contract_edges(g: PlaneGraph | PlaneMultigraph, edge_set: Iterable[int]) -> tuple[PlaneMultigraph, int]:
    """Return a contracted copy of ``g`` and the id of the new super vertex."""
    h = PlaneMultigraph(g) if isinstance(g, PlaneGraph) else g.copy()
    new = h.contract(edge_set)
    return h, new


# -- I/O ----------------------------------------------------------------------


def graph_to_json(g: PlaneGraph) -> dict:
    return {
        "vertices": [{"id": i, "x": x, "y": y} for i, (x, y) in enumerate(g.coords)],
        "edges": [[u, v] for u, v in g.edges],
    }


def graph_from_json(data: dict | str, *, cubic: bool = True) -> PlaneGraph:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    try:
        verts = sorted(data["vertices"], key=lambda r: r["id"])
        ids = [int(r["id"]) for r in verts]
        if ids != list(range(len(ids))):
            raise ParseError("vertex ids must be exactly 0..n-1")
        coords = [(r["x"], r["y"]) for r in verts]
        edges = [tuple(e) for e in data["edges"]]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed graph JSON: {exc}") from exc
    return build_plane_graph(coords, edges, cubic=cubic)


def load_graph(path: str | Path, *, cubic: bool = True) -> PlaneGraph:
    return graph_from_json(Path(path).read_text(), cubic=cubic)


def graph_to_dot(g: PlaneGraph) -> str:
    lines = ["graph G {"]
    for i, (x, y) in enumerate(g.coords):
        lines.append(f'  {i} [pos="{x:g},{y:g}!"];')
    for u, v in g.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"

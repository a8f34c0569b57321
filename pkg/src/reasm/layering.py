"""Edge-layer peeling of a plane graph into cycles and inter-cycle trees.

Layer ``i`` is the set of edges on the unbounded face of the residual graph
left after removing layers ``0..i-1``. Edges met once by that face walk are
cycle edges, edges met twice are tree edges. The number of layers is the
edge outerplanarity ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import Disconnected
from .plane_graph import (
    EdgeKind,
    PlaneGraph,
    PlaneMultigraph,
    classify_walk_edges,
    outer_face_walk,
)


class VertexClass(str, Enum):
    INWARD = "inward"
    OUTWARD = "outward"


@dataclass(frozen=True)
class EdgeLayer:
    index: int
    cycle_edges: frozenset[int]
    ict_edges: frozenset[int]


@dataclass(frozen=True)
class Cycle:
    """A cycle of one layer; ``ring`` is clockwise ``(vertex, edge to next)``."""

    id: int
    level: int
    ring: tuple[tuple[int, int], ...]
    parent: int | None = None

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.ring)

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(e for _, e in self.ring)


@dataclass(frozen=True)
class Ict:
    """Inter-cycle tree: a component of one layer's tree edges."""

    id: int
    level: int
    edges: frozenset[int]
    leaves: tuple[int, ...]
    internal: tuple[int, ...]
    enclosing: int | None = None


@dataclass(frozen=True)
class LayerDecomposition:
    k: int
    layers: tuple[EdgeLayer, ...]
    cycles: tuple[Cycle, ...]
    icts: tuple[Ict, ...]
    vertex_class: dict[int, VertexClass] = field(default_factory=dict)
    # ICTs whose outward leaves sit on each cycle, keyed by cycle id
    outside_icts: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def cycle_of_vertex(self) -> dict[int, int]:
        return {v: c.id for c in self.cycles for v in c.vertices}

    def cycle_of_edge(self) -> dict[int, int]:
        return {e: c.id for c in self.cycles for e in c.edges}

    def ict_of_edge(self) -> dict[int, int]:
        return {e: t.id for t in self.icts for e in t.edges}

    def to_json(self, g: PlaneGraph) -> dict:
        def pairs(es):
            return [list(g.edges[e]) for e in sorted(es)]

        return {
            "k": self.k,
            "layers": [{"L": pairs(l.cycle_edges), "M": pairs(l.ict_edges)} for l in self.layers],
            "cycles": [{"level": c.level, "ring": list(c.vertices)} for c in self.cycles],
            "icts": [{"level": t.level, "edges": pairs(t.edges)} for t in self.icts],
            "inward": sorted(v for v, c in self.vertex_class.items() if c is VertexClass.INWARD),
            "outward": sorted(v for v, c in self.vertex_class.items() if c is VertexClass.OUTWARD),
        }


def _edge_components(g: PlaneGraph, edge_ids) -> list[tuple[list[int], list[int]]]:
    """Connected components of an edge subset as ``(sorted vertices, sorted edges)``."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in edge_ids:
        u, v = g.edges[e]
        adj.setdefault(u, []).append((v, e))
        adj.setdefault(v, []).append((u, e))
    seen: set[int] = set()
    comps = []
    for s in sorted(adj):
        if s in seen:
            continue
        seen.add(s)
        verts, es, stack = [s], set(), [s]
        while stack:
            x = stack.pop()
            for y, e in adj[x]:
                es.add(e)
                if y not in seen:
                    seen.add(y)
                    verts.append(y)
                    stack.append(y)
        comps.append((sorted(verts), sorted(es)))
    return comps


def decompose(g: PlaneGraph) -> LayerDecomposition:
    """Peel ``g`` into edge layers and extract cycles and inter-cycle trees."""
    if g.m == 0:
        return LayerDecomposition(0, (), (), {}, {})
    h = PlaneMultigraph(g)
    if sum(1 for c in h.components() if len(c) > 1 or h.rings[c[0]]) > 1:
        raise Disconnected("graph has more than one component")

    layers: list[EdgeLayer] = []
    direction: dict[int, tuple[int, int]] = {}  # cycle edge -> walked (tail, head)
    # residual component label per vertex, one map per layer index
    comp_maps: list[dict[int, int]] = []
    while h.alive:
        i = len(layers)
        comps = [c for c in h.components() if any(h.rings[v] for v in c)]
        comp_maps.append({v: ci for ci, c in enumerate(comps) for v in c if h.rings[v]})
        L: set[int] = set()
        M: set[int] = set()
        for comp in comps:
            w = outer_face_walk(h, comp)
            kinds = classify_walk_edges(w)
            for e, t, hd in w.steps:
                if kinds[e] is EdgeKind.BOUNDING:
                    L.add(e)
                    direction[e] = (t, hd)
                else:
                    M.add(e)
        layers.append(EdgeLayer(i, frozenset(L), frozenset(M)))
        h.remove_edges(L | M)
    k = len(layers)

    raw_cycles = []
    for layer in layers:
        for verts, es in _edge_components(g, layer.cycle_edges):
            succ = {direction[e][0]: (direction[e][1], e) for e in es}
            start = verts[0]
            ring = []
            v = start
            if len(succ) == len(es) == len(verts):
                while True:
                    nxt, e = succ[v]
                    ring.append((v, e))
                    v = nxt
                    if v == start:
                        break
            else:
                # not a simple cycle; keep the walk order so validators can flag it
                ring = sorted((direction[e][0], e) for e in es)
            raw_cycles.append((layer.index, min(verts), tuple(ring)))
    raw_cycles.sort(key=lambda t: (t[0], t[1]))

    raw_icts = []
    for layer in layers:
        for verts, es in _edge_components(g, layer.ict_edges):
            deg = {v: 0 for v in verts}
            for e in es:
                for x in g.edges[e]:
                    deg[x] += 1
            leaves = tuple(v for v in verts if deg[v] == 1)
            internal = tuple(v for v in verts if deg[v] != 1)
            raw_icts.append((layer.index, min(verts), frozenset(es), leaves, internal))
    raw_icts.sort(key=lambda t: (t[0], t[1]))

    # a residual component after peeling layer i lies inside exactly one
    # level-i cycle: the one whose vertices still carry residual edges there
    enclosing_of_comp: dict[tuple[int, int], int] = {}
    for cid, (lvl, _, ring) in enumerate(raw_cycles):
        if lvl + 1 >= k:
            continue
        cmap = comp_maps[lvl + 1]
        for v, _ in ring:
            if v in cmap:
                enclosing_of_comp.setdefault((lvl + 1, cmap[v]), cid)

    def enclosing(level: int, v: int) -> int | None:
        if level == 0:
            return None
        return enclosing_of_comp.get((level, comp_maps[level][v]))

    cycles = tuple(
        Cycle(cid, lvl, ring, enclosing(lvl, ring[0][0]))
        for cid, (lvl, _, ring) in enumerate(raw_cycles)
    )
    icts = tuple(
        Ict(tid, lvl, es, leaves, internal, enclosing(lvl, min(leaves + internal)))
        for tid, (lvl, _, es, leaves, internal) in enumerate(raw_icts)
    )

    level_of_edge = {}
    for layer in layers:
        for e in layer.ict_edges:
            level_of_edge[e] = layer.index
    cycle_edges = {e for c in cycles for e in c.edges}
    vertex_class: dict[int, VertexClass] = {}
    for c in cycles:
        for v in c.vertices:
            third = [e for e in g.rings[v] if e not in cycle_edges]
            if len(third) != 1:
                continue
            j = level_of_edge.get(third[0])
            if j == c.level + 1:
                vertex_class[v] = VertexClass.INWARD
            elif j == c.level:
                vertex_class[v] = VertexClass.OUTWARD

    cyc_of_v = {v: c.id for c in cycles for v in c.vertices}
    outside: dict[int, list[int]] = {c.id: [] for c in cycles}
    for t in icts:
        for v in t.leaves:
            cid = cyc_of_v.get(v)
            if cid is not None and cycles[cid].level == t.level and t.id not in outside[cid]:
                outside[cid].append(t.id)
    return LayerDecomposition(
        k,
        tuple(layers),
        cycles,
        icts,
        vertex_class,
        {c: tuple(ts) for c, ts in outside.items()},
    )


def edge_outerplanarity(g: PlaneGraph) -> int:
    return decompose(g).k


def vertex_outerplanarity_bounds(d: LayerDecomposition) -> tuple[int, int]:
    """Admissible range of the vertex-peeling index given edge outerplanarity ``k``."""
    return max(d.k - 1, 0), d.k


def cacti_check(d: LayerDecomposition, g: PlaneGraph) -> bool:
    """Validate that each layer is a union of simple cycles plus a forest."""
    seen: set[int] = set()
    for layer in d.layers:
        both = layer.cycle_edges | layer.ict_edges
        if layer.cycle_edges & layer.ict_edges or both & seen:
            return False
        seen |= both
    if seen != set(range(g.m)):
        return False

    for layer in d.layers:
        comps_l = _edge_components(g, layer.cycle_edges)
        for verts, es in comps_l:
            if len(verts) != len(es):
                return False
            deg = {v: 0 for v in verts}
            for e in es:
                for x in g.edges[e]:
                    deg[x] += 1
            if any(c != 2 for c in deg.values()):
                return False
        for verts, es in _edge_components(g, layer.ict_edges):
            if len(es) != len(verts) - 1:
                return False
        # every cycle of G[K_i] must be one of the layer's simple cycles
        all_edges = layer.cycle_edges | layer.ict_edges
        comps = _edge_components(g, all_edges)
        cyclomatic = sum(len(es) - len(vs) + 1 for vs, es in comps)
        if cyclomatic != len(comps_l):
            return False
    return True

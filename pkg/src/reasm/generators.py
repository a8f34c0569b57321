"""Graph families with a built-in corpus, plus expansion of high-degree vertices.

The concentric family ``H(f, k)`` has ``k`` nested cycles joined by ``f``
radial edges between each consecutive pair. Vertex ids are grouped by cycle,
outermost first, each cycle listed clockwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BadParams, DegreeTooLow, WrongFamily
from .plane_graph import PlaneGraph, build_plane_graph
from .reassembly import ReassemblyTree, left_comb

_RADIUS_RATIO = 0.45


@dataclass(frozen=True)
class HFamilyParams:
    k: int
    f: int

    @property
    def dense(self) -> bool:
        return self.f > Fraction(16 * self.k - 13, 6)

    def build(self) -> PlaneGraph:
        return gen_hfk(self.k, self.f)


def _check_hfk(k: int, f: int) -> None:
    if k < 2:
        raise BadParams(f"k must be at least 2, got {k}")
    if f < 3:
        raise BadParams(f"f must be at least 3, got {f}")


def _cycle_base(k: int, f: int, i: int) -> int:
    return 0 if i == 0 else f + (i - 1) * 2 * f


def x_id(k: int, f: int, i: int, j: int) -> int:
    """Endpoint on cycle ``i-1`` of the ``j``-th radial edge of level ``i`` (1-based)."""
    if i == 1:
        return j - 1
    return _cycle_base(k, f, i - 1) + 2 * (j - 1) + 1


def y_id(k: int, f: int, i: int, j: int) -> int:
    """Endpoint on cycle ``i`` of the ``j``-th radial edge of level ``i`` (1-based)."""
    if i == k - 1:
        return _cycle_base(k, f, i) + (j - 1)
    return _cycle_base(k, f, i) + 2 * (j - 1)


def hfk_positions(k: int, f: int) -> tuple[list[int], list[int]]:
    """Cycle index and angular slot of every vertex.

    Slots count half-steps of ``pi/f`` clockwise from up; both ends of the
    ``j``-th radial edge of level ``i`` sit in slot ``2j + i - 1``, which
    shifts each level by one half-step relative to the one above.
    """
    _check_hfk(k, f)
    n = 2 * (k - 1) * f
    level = [0] * n
    pos = [0] * n
    for i in range(1, k):
        for j in range(1, f + 1):
            s = (2 * j + i - 1) % (2 * f)
            x, y = x_id(k, f, i, j), y_id(k, f, i, j)
            level[x], pos[x] = i - 1, s
            level[y], pos[y] = i, s
    return level, pos


def _cycle_rings(k: int, f: int) -> list[list[int]]:
    rings = [[x_id(k, f, 1, j) for j in range(1, f + 1)]]
    for i in range(1, k - 1):
        ring = []
        for j in range(1, f + 1):
            ring += [y_id(k, f, i, j), x_id(k, f, i + 1, j)]
        rings.append(ring)
    rings.append([y_id(k, f, k - 1, j) for j in range(1, f + 1)])
    return rings


def gen_hfk(k: int, f: int) -> PlaneGraph:
    """Concentric family graph with ``k`` cycles and ``f`` radial edges per level."""
    _check_hfk(k, f)
    level, pos = hfk_positions(k, f)
    coords = []
    for v in range(len(level)):
        r = 10.0 * _RADIUS_RATIO ** level[v]
        phi = pos[v] * math.pi / f
        coords.append((r * math.sin(phi), r * math.cos(phi)))
    edges = []
    for ring in _cycle_rings(k, f):
        edges += [(ring[t], ring[(t + 1) % len(ring)]) for t in range(len(ring))]
    for i in range(1, k):
        edges += [(x_id(k, f, i, j), y_id(k, f, i, j)) for j in range(1, f + 1)]
    return build_plane_graph(coords, edges)


def gen_constant_density(k: int, c: int) -> PlaneGraph:
    """Concentric family with a fixed number ``c`` of radial edges per level."""
    if c < 3:
        raise BadParams(f"c must be at least 3, got {c}")
    return gen_hfk(k, c)


def inside_out_order(k: int, c: int) -> list[int]:
    """Vertices cycle by cycle from the innermost outwards, each clockwise.

    Every cycle below the innermost starts at the endpoint of the first
    radial edge that leads inwards from it.
    """
    _check_hfk(k, c)
    order = [y_id(k, c, k - 1, j) for j in range(1, c + 1)]
    for lvl in range(k - 2, 0, -1):
        ring = _cycle_rings(k, c)[lvl]
        s = ring.index(x_id(k, c, lvl + 1, 1))
        order += ring[s:] + ring[:s]
    order += [x_id(k, c, 1, j) for j in range(1, c + 1)]
    return order


def inside_out_reassemble(g: PlaneGraph) -> ReassemblyTree:
    """Left-comb reassembling that adds vertices cycle by cycle from the inside."""
    from .layering import decompose

    k = decompose(g).k
    if k < 2 or g.n % (2 * (k - 1)):
        raise WrongFamily("vertex count does not fit the concentric family")
    c = g.n // (2 * (k - 1))
    if c < 3:
        raise WrongFamily("fewer than three radial edges per level")
    ref = gen_constant_density(k, c)
    if {frozenset(e) for e in g.edges} != {frozenset(e) for e in ref.edges}:
        raise WrongFamily("edges differ from the concentric family labeling")
    return left_comb(inside_out_order(k, c))


# -- expansion -----------------------------------------------------------------


def _point_segment_distance(p, a, b) -> float:
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    t = 0.0 if L2 == 0 else max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / L2))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def expand_to_three_regular(g: PlaneGraph) -> PlaneGraph:
    """Replace each vertex of degree ``p > 3`` by a clockwise ``p``-cycle.

    The ``i``-th new vertex sits a short way along the ``i``-th incident edge
    in rotation order and takes over that edge. Degree-3 vertices are kept,
    so a 3-regular input comes back unchanged.
    """
    for v in range(g.n):
        if len(g.rings[v]) < 3:
            raise DegreeTooLow(f"vertex {v} has degree {len(g.rings[v])}")
    if all(len(r) == 3 for r in g.rings):
        return g

    # new id of the copy of v that carries edge e
    slot: dict[tuple[int, int], int] = {}
    coords: list[tuple[float, float]] = []
    cycle_edges: list[tuple[int, int]] = []
    for v in range(g.n):
        ring = g.rings[v]
        if len(ring) == 3:
            nid = len(coords)
            coords.append(g.coords[v])
            for e in ring:
                slot[(v, e)] = nid
            continue
        px, py = g.coords[v]
        clearance = min(
            _point_segment_distance(g.coords[v], g.coords[a], g.coords[b])
            for a, b in g.edges
            if v not in (a, b)
        ) if g.m > len(ring) else math.inf
        shortest = min(math.dist(g.coords[v], g.coords[g.other(e, v)]) for e in ring)
        r = 0.25 * min(clearance, shortest)
        ids = []
        for e in ring:
            wx, wy = g.coords[g.other(e, v)]
            d = math.hypot(wx - px, wy - py)
            nid = len(coords)
            coords.append((px + r * (wx - px) / d, py + r * (wy - py) / d))
            slot[(v, e)] = nid
            ids.append(nid)
        cycle_edges += [(ids[t], ids[(t + 1) % len(ids)]) for t in range(len(ids))]
    edges = [(slot[(a, e)], slot[(b, e)]) for e, (a, b) in enumerate(g.edges)] + cycle_edges
    return build_plane_graph(coords, edges)


# -- corpus --------------------------------------------------------------------

_FIG30_POS = {
    "A1": (0, 12), "A2": (12, 12), "A3": (12, 0), "A4": (0, 0),
    "A5": (17, 12), "A6": (25, 12), "A7": (25, 3), "A8": (17, 3),
    "A9": (15, 23), "A10": (18, 20), "A11": (15, 17), "A12": (12, 20), "A13": (15, 15),
    "B1": (2, 10), "B2": (10, 10), "B3": (10, 2), "B4": (2, 2),
    "B5": (19, 10), "B6": (23, 10), "B7": (23, 5), "B8": (19, 5), "B9": (15, 20),
    "C1": (4, 8), "C2": (8, 8), "C3": (8, 4), "C4": (4, 4),
    "C5": (21, 10), "C6": (21, 7), "C7": (19, 7), "D": (6, 6),
}
_FIG30_EDGES = """
A1-A2 A2-A3 A3-A4 A4-A1 A5-A6 A6-A7 A7-A8 A8-A5 A9-A10 A10-A11 A11-A12 A12-A9
A2-A13 A5-A13 A11-A13 B1-B2 B2-B3 B3-B4 B4-B1 B5-C5 C5-B6 C7-B5 B6-B7 B7-B8 B8-C7
C1-C2 C2-C3 C3-C4 C4-C1 C5-C6 C6-C7 B5-C6 A1-B1 A3-B3 A4-B4 A6-B6 A7-B7 A8-B8
A12-B9 A9-B9 A10-B9 B2-C2 C1-D C3-D C4-D
"""

# the outer corners sit off the grid of the original drawing so that the
# straight outer edges avoid passing through inner vertices
_FIG4REG_POS = {
    "B": (6, -4), "D": (16, 6), "F": (6, 16), "H": (-4, 6),
    "I": (3, 3), "J": (6, 3), "K": (9, 3), "L": (9, 6),
    "M": (9, 9), "N": (6, 9), "O": (3, 9), "P": (3, 6),
}
_FIG4REG_EDGES = """
B-D D-F F-H H-B B-K D-M F-O H-I I-J I-B J-K J-L K-D K-L L-M L-N M-F M-N N-O N-P
O-H O-P P-I P-J
"""

_FIGNONREG_POS = {
    "A": (0, 0), "B": (12, 0), "C": (0, 2), "D": (6, 2), "E": (12, 2), "F": (3, 5),
    "G": (6, 5), "H": (9, 5), "I": (6, 7), "J": (0, 8), "K": (12, 8), "L": (6, 9),
    "M": (3, 11), "N": (6, 11), "O": (9, 11), "P": (0, 14), "Q": (6, 14), "R": (12, 14),
    "S": (0, 16), "T": (12, 16),
}
_FIGNONREG_EDGES = """
A-C B-E C-D C-J D-E D-F D-H E-K F-G F-J F-M G-H G-I H-K H-O J-M J-P K-O K-R L-N
M-N M-Q N-O O-Q P-Q P-S Q-R R-T
"""


def _named_graph(pos: dict[str, tuple[float, float]], edge_list: str, *, cubic: bool) -> tuple[PlaneGraph, list[str]]:
    names = list(pos)
    idx = {name: i for i, name in enumerate(names)}
    edges = []
    for token in edge_list.split():
        a, b = token.split("-")
        edges.append((idx[a], idx[b]))
    return build_plane_graph([pos[nm] for nm in names], edges, cubic=cubic), names


def cube() -> PlaneGraph:
    coords = [(0, 0), (6, 0), (6, 6), (0, 6), (2, 2), (4, 2), (4, 4), (2, 4)]
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)]
    return build_plane_graph(coords, edges)


def figure_30v() -> tuple[PlaneGraph, list[str]]:
    """The 30-vertex example with three blocks of nested squares and four bridges."""
    return _named_graph(_FIG30_POS, _FIG30_EDGES, cubic=True)


def figure_four_regular() -> tuple[PlaneGraph, list[str]]:
    return _named_graph(_FIG4REG_POS, _FIG4REG_EDGES, cubic=False)


def figure_non_regular() -> tuple[PlaneGraph, list[str]]:
    return _named_graph(_FIGNONREG_POS, _FIGNONREG_EDGES, cubic=False)


def bridged_cubes() -> PlaneGraph:
    """Two cubes, each with one outer edge subdivided, joined at the new vertices."""
    left = [(0, 0), (6, 0), (6, 6), (0, 6), (2, 2), (4, 2), (4, 4), (2, 4)]
    right = [(x + 10, y) for x, y in left]
    coords = left + right + [(6, 3), (10, 3)]
    base = [(0, 1), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)]
    edges = list(base) + [(16, 1), (16, 2)]
    # right cube: its left side 8-11 (3 -> 11) is subdivided instead
    edges += [(a + 8, b + 8) for a, b in [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)]]
    edges += [(17, 8), (17, 11), (16, 17)]
    return build_plane_graph(coords, edges)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    graph: PlaneGraph
    expected: dict[str, int | None]
    provenance: dict[str, str] = field(default_factory=dict)


def load_corpus() -> list[CorpusEntry]:
    g30, _ = figure_30v()
    g4, _ = figure_four_regular()
    return [
        CorpusEntry(
            "cube", cube(),
            {"n": 8, "k": 2, "cycles": 2, "icts": 4, "alpha_ks": 4},
            {"k": "DERIVED: two peels", "alpha_ks": "DERIVED: 2k at k=2"},
        ),
        CorpusEntry(
            "fig-3reg-30v", g30,
            {"n": 30, "k": 4, "cycles": 6, "icts": 11, "alpha_ks": None},
            {"k": "CITED: figure caption", "cycles": "CITED: figure caption", "icts": "CITED: figure caption"},
        ),
        CorpusEntry(
            "hfk-4-7", gen_hfk(4, 7),
            {"n": 42, "k": 4, "cycles": 4, "icts": 21, "alpha_ks": 8},
            {"n": "CITED: 2(k-1)f", "k": "CITED: figure caption", "alpha_ks": "CITED: 2k on the family"},
        ),
        CorpusEntry(
            "const-5-3", gen_constant_density(5, 3),
            {"n": 24, "k": 5, "cycles": 5, "icts": 12, "alpha_ks": 10},
            {"n": "CITED: 6k' with k'=4", "alpha_ks": "CITED: 2k on the family"},
        ),
        CorpusEntry(
            "prism", gen_constant_density(2, 3),
            {"n": 6, "k": 2, "cycles": 2, "icts": 3, "alpha_ks": None},
            {"n": "DERIVED: 2*1*3"},
        ),
        CorpusEntry(
            "fig-4reg-expanded", expand_to_three_regular(g4),
            {"n": 48, "k": None, "cycles": None, "icts": None, "alpha_ks": None},
            {"n": "DERIVED: 12 vertices of degree 4"},
        ),
        CorpusEntry(
            "bridged-cubes", bridged_cubes(),
            {"n": 18, "k": 2, "cycles": None, "icts": None, "alpha_ks": 4},
            {"alpha_ks": "DERIVED: lifted run on the construction"},
        ),
    ]


def corpus_entry(name: str) -> CorpusEntry:
    for entry in load_corpus():
        if entry.name == name:
            return entry
    raise BadParams(f"unknown corpus entry {name!r}")


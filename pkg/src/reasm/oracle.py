"""Exact optimum of the alpha-measure by dynamic programming over vertex subsets.

Also hosts closed-form quantities used to cross-check the hard family,
such as the cluster-size bound and the density threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol, Sequence

from .errors import BadParams, TooLarge, WrongFamily
from .reassembly import ReassemblyTree, TreeBuilder


class GraphLike(Protocol):
    @property
    def n(self) -> int: ...

    @property
    def edges(self) -> Sequence[tuple[int, int]]: ...


@dataclass(frozen=True)
class OptimalAlphaResult:
    alpha_opt: int
    witness: ReassemblyTree
    subset_count: int


def optimal_alpha(g: GraphLike, max_n: int = 16) -> OptimalAlphaResult:
    """Smallest alpha over all binary reassemblings of ``g``.

    ``F(S)`` is the best achievable maximum boundary inside a tree for ``S``;
    it is ``max(bd(S), min over splits A|S-A of max(F(A), F(S-A)))``. Splits
    always put the lowest vertex of ``S`` in ``A`` so each is seen once, and a
    split is skipped when either side's boundary already reaches the best
    value found.
    """
    n = g.n
    if n > max_n:
        raise TooLarge(f"{n} vertices exceeds the limit of {max_n}")
    if n == 0:
        raise BadParams("empty graph")
    b = TreeBuilder()
    if n == 1:
        return OptimalAlphaResult(0, b.build(b.leaf(0)), 1)

    adj = [0] * n
    deg = [0] * n
    loops = [0] * n
    mult: dict[tuple[int, int], int] = {}
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
        if u == v:
            loops[u] += 1
            continue
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        key = (min(u, v), max(u, v))
        mult[key] = mult.get(key, 0) + 1
    simple = all(c == 1 for c in mult.values())

    bd_cache: dict[int, int] = {0: 0}

    def bd(s: int) -> int:
        got = bd_cache.get(s)
        if got is not None:
            return got
        low = s & -s
        v = low.bit_length() - 1
        rest = s ^ low
        if simple:
            inside = (adj[v] & rest).bit_count()
        else:
            inside = sum(mult.get((min(v, w), max(v, w)), 0) for w in range(n) if (rest >> w) & 1)
        val = bd(rest) + deg[v] - 2 * loops[v] - 2 * inside
        bd_cache[s] = val
        return val

    best: dict[int, int] = {}
    choice: dict[int, int] = {}

    def solve(s: int) -> int:
        got = best.get(s)
        if got is not None:
            return got
        if s & (s - 1) == 0:
            best[s] = bd(s)
            return best[s]
        floor = bd(s)
        low = s & -s
        rest = s ^ low
        top = math.inf
        pick = 0
        # submasks of rest, each joined with the lowest bit, excluding all of s
        sub = rest
        while True:
            a = sub | low
            if a != s:
                c = s ^ a
                if bd(a) < top and bd(c) < top:
                    val = max(solve(a), solve(c))
                    if val < top:
                        top, pick = val, a
                        if top <= floor:
                            break
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[s] = max(floor, top)
        choice[s] = pick
        return best[s]

    full = (1 << n) - 1
    alpha = solve(full)

    def build(s: int) -> int:
        if s & (s - 1) == 0:
            return b.leaf(s.bit_length() - 1)
        a = choice[s]
        return b.join(build(a), build(s ^ a))

    return OptimalAlphaResult(alpha, b.build(build(full)), len(best))


# -- closed forms --------------------------------------------------------------


def max_cluster_bound(k: int) -> int:
    """Ceiling of (16k^2 - 32k + 13) / 12."""
    if k < 2:
        raise BadParams("k must be at least 2")
    return -((-(16 * k * k - 32 * k + 13)) // 12)


def cluster_parabola(c: int, q: Fraction | int) -> Fraction:
    """f_c(q) = -3/16 q^2 + (c-1)/4 q + (c^2 - 2c)/4."""
    q = Fraction(q)
    return Fraction(-3, 16) * q * q + Fraction(c - 1, 4) * q + Fraction(c * c - 2 * c, 4)


def parabola_vertex(c: int) -> tuple[Fraction, Fraction]:
    """Maximizer and maximum of ``cluster_parabola(c, .)``."""
    qh = Fraction(2 * (c - 1), 3)
    return qh, cluster_parabola(c, qh)


def density_threshold(k: int) -> Fraction:
    """(16k - 13) / 6; families with more inter-cycle edges per level are dense."""
    if k < 2:
        raise BadParams("k must be at least 2")
    return Fraction(16 * k - 13, 6)


# -- strongly regular clusters of the concentric family ------------------------


@dataclass(frozen=True)
class ClusterStats:
    side: str  # "outer" or "inner"
    p: int
    n: int
    q: int
    boundary: int
    size: int
    vertices: frozenset[int]


def _measure(g: GraphLike, xs: frozenset[int]) -> int:
    return sum(1 for u, v in g.edges if (u in xs) != (v in xs))


def _is_regular(g: GraphLike, xs: frozenset[int], faces: list[frozenset[int]]) -> bool:
    """Every edge of the induced subgraph must border a face lying inside ``xs``."""
    inner = [f for f in faces if f <= xs]
    for u, v in g.edges:
        if u in xs and v in xs and not any(u in f and v in f for f in inner):
            return False
    return True


def enumerate_strongly_regular(g: GraphLike, k: int, f: int, *, rotations: bool = False) -> list[ClusterStats]:
    """All strongly regular clusters of the concentric family graph ``g``.

    A cluster is a band of consecutive levels whose angular extent narrows by
    one half-step per level away from the bounding cycle. Vertex sets are
    materialized from angular positions and measured on ``g`` itself.
    ``rotations`` also yields every rotated copy instead of one per shape.
    """
    from .generators import hfk_positions, gen_hfk
    from .plane_graph import all_face_walks

    ref = gen_hfk(k, f)
    if g.n != ref.n or {frozenset(e) for e in g.edges} != {frozenset(e) for e in ref.edges}:
        raise WrongFamily("graph is not the concentric family graph for these parameters")
    level, pos = hfk_positions(k, f)
    period = 2 * f
    by_level: dict[int, list[int]] = {}
    for v in range(g.n):
        by_level.setdefault(level[v], []).append(v)

    def band(lo: int, hi: int, lvl: int) -> set[int]:
        width = hi - lo
        return {v for v in by_level[lvl] if (pos[v] - lo) % period <= width}

    # bounded faces only: the two faces ringed by the outermost and innermost cycles are excluded
    faces = []
    for w in all_face_walks(ref):
        vs = frozenset(w.vertices())
        if len({level[v] for v in vs}) > 1:
            faces.append(vs)

    out = []
    starts = range(f) if rotations else range(1)
    for p in range(1, k):
        for n in range(p, f):
            for a in starts:
                b = a + n
                xs: set[int] = set()
                xs |= band(2 * a, 2 * b, 0)
                for lvl in range(1, p + 1):
                    xs |= band(2 * a + lvl - 1, 2 * b - lvl + 1, lvl)
                q = n - p + 1 if p == k - 1 else 2 * (n - p + 1)
                fx = frozenset(xs)
                if _is_regular(g, fx, faces):
                    out.append(ClusterStats("outer", p, n, q, _measure(g, fx), len(fx), fx))

                ys: set[int] = set()
                ys |= band(2 * a + k - 2, 2 * b + k - 2, k - 1)
                for lvl in range(k - 2, k - 2 - p, -1):
                    ys |= band(2 * a + 2 * k - 4 - lvl, 2 * b + lvl, lvl)
                fy = frozenset(ys)
                if _is_regular(g, fy, faces):
                    out.append(ClusterStats("inner", p, n, q, _measure(g, fy), len(fy), fy))
    return out

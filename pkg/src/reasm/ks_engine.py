"""Layer-driven reassembling of 3-regular plane graphs.

The engine alternates two kinds of rounds on a contracting multigraph.
A collapse round contracts whole inter-cycle trees whose leaves sit
consecutively on one cycle; a merge round contracts cycle edges between a
super vertex and its clockwise neighbor on its innermost cycle, then
deletes self-loops. Every contraction is mirrored by nodes of a binary reassembling
tree whose largest boundary is at most twice the edge outerplanarity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import networkx as nx

from .errors import (
    BadOuterplanarity,
    Disconnected,
    EngineStuck,
    NotBiconnected,
    NotEligible,
)
from .layering import LayerDecomposition, VertexClass, decompose
from .plane_graph import PlaneGraph, PlaneMultigraph
from .reassembly import ReassemblyTree, TreeBuilder


class CollapseKind(str, Enum):
    TYPE_A = "type_a"
    TYPE_B = "type_b"


@dataclass(frozen=True)
class CollapseEligibility:
    ict: int
    kind: CollapseKind
    root: int | None
    run: tuple[int, ...]  # sibling vertices in clockwise order along their cycle
    start: int  # leaf where the traversal begins


@dataclass(frozen=True)
class MergeAction:
    phi: int
    mu: int
    case: int


@dataclass(frozen=True)
class CollapseEvent:
    round: int
    ict: int
    kind: str
    new: int

    def to_json(self) -> dict:
        return {"type": "collapse", "round": self.round, "ict": self.ict, "kind": self.kind, "new": self.new}


@dataclass(frozen=True)
class MergeEvent:
    round: int
    phi: int
    mu: int
    case: int
    edges: tuple[int, ...]
    new: int

    def to_json(self) -> dict:
        return {
            "type": "merge", "round": self.round, "phi": self.phi, "mu": self.mu,
            "case": self.case, "edges": list(self.edges), "new": self.new,
        }


@dataclass(frozen=True)
class RoundBoundary:
    round: int
    kind: str

    def to_json(self) -> dict:
        return {"type": "round", "round": self.round, "kind": self.kind}


Event = Union[CollapseEvent, MergeEvent, RoundBoundary]


@dataclass
class KsTrace:
    events: list[Event] = field(default_factory=list)
    # vertex bags after each round, for drawing progress snapshots
    snapshots: list[tuple[int, str, list[list[int]]]] = field(default_factory=list)

    @property
    def rounds(self) -> int:
        return sum(1 for e in self.events if isinstance(e, RoundBoundary))

    def to_json(self) -> dict:
        return {"rounds": self.rounds, "events": [e.to_json() for e in self.events]}


class ContractionState:
    """Working state of one engine run.

    ``lifted`` enables the extensions needed for inputs with bridges:
    merges that would leave a cycle cut in more than two places are refused.
    """

    def __init__(self, g: PlaneGraph, d: LayerDecomposition, *, lifted: bool = False, check: bool = False):
        self.g = g
        self.d = d
        self.lifted = lifted
        self.check = check
        self.mg = PlaneMultigraph(g)
        self.round_no = 0
        self.trace = KsTrace()
        self.builder = TreeBuilder()
        self.node_of: dict[int, int] = {v: self.builder.leaf(v) for v in range(g.n)}
        self.cycle_of_edge = d.cycle_of_edge()
        self.ict_of_edge = d.ict_of_edge()
        self.alive_icts: set[int] = {t.id for t in d.icts}
        # side of each cycle edge holding its clockwise tail
        self.tail_side: dict[int, int] = {}
        for c in d.cycles:
            for v, e in c.ring:
                self.tail_side[e] = 0 if g.edges[e][0] == v else 1
        self.level_of_cycle = {c.id: c.level for c in d.cycles}

    # -- derived quantities ------------------------------------------------------

    def is_super(self, v: int) -> bool:
        return self.mg.is_super(v)

    def cycles(self, mu: int) -> set[int]:
        """Cycles with a non-loop edge at ``mu``."""
        out = set()
        for e, _ in self.mg.rings[mu]:
            c = self.cycle_of_edge.get(e)
            if c is not None and not self.mg.is_loop(e):
                out.add(c)
        return out

    def inmost(self, mu: int) -> int | None:
        cs = self.cycles(mu)
        if not cs:
            return None
        top = max(self.level_of_cycle[c] for c in cs)
        deepest = sorted(c for c in cs if self.level_of_cycle[c] == top)
        if len(deepest) > 1 and self.check:
            raise EngineStuck(f"vertex {mu} straddles two cycles of level {top}")
        return deepest[0]

    def cw_neighbor(self, mu: int, cycle: int | None = None) -> int | None:
        """Head of the clockwise edge of ``mu``'s innermost cycle leaving ``mu``."""
        x = self.inmost(mu) if cycle is None else cycle
        if x is None:
            return None
        heads = []
        for e, side in self.mg.rings[mu]:
            if self.cycle_of_edge.get(e) == x and side == self.tail_side[e] and not self.mg.is_loop(e):
                heads.append(self.mg.owner(self.g.edges[e][1 - side]))
        if not heads:
            return None
        if len(set(heads)) > 1 and self.check:
            raise EngineStuck(f"vertex {mu} holds more than one arc of cycle {x}")
        return heads[0]

    def leaf_icts(self, mu: int) -> set[int]:
        """Uncollapsed trees with an edge at ``mu``."""
        out = set()
        for e, _ in self.mg.rings[mu]:
            t = self.ict_of_edge.get(e)
            if t is not None and t in self.alive_icts:
                out.add(t)
        return out

    def is_outward(self, v: int) -> bool:
        return not self.is_super(v) and self.d.vertex_class.get(v) is VertexClass.OUTWARD

    def is_inward(self, v: int) -> bool:
        return not self.is_super(v) and self.d.vertex_class.get(v) is VertexClass.INWARD

    def live_cycle_sequence(self, x: int) -> list[int]:
        """Owners around cycle ``x`` clockwise, with repeats collapsed."""
        seq: list[int] = []
        for v, _ in self.d.cycles[x].ring:
            o = self.mg.owner(v)
            if not seq or seq[-1] != o:
                seq.append(o)
        while len(seq) > 1 and seq[0] == seq[-1]:
            seq.pop()
        return seq

    # -- collapses -------------------------------------------------------------

    def gate_open(self, t: int) -> bool:
        enc = self.d.icts[t].enclosing
        if enc is None:
            return True
        outside = [u for u in self.d.outside_icts.get(enc, ()) if u in self.alive_icts]
        return len(outside) <= 1

    def eligibility(self, t: int) -> CollapseEligibility | None:
        if t not in self.alive_icts or not self.gate_open(t):
            return None
        ict = self.d.icts[t]
        leaves = [self.mg.owner(v) for v in ict.leaves]
        roots, sibs, detached = [], [], []
        for mu in leaves:
            if self.is_outward(mu):
                roots.append(mu)
            elif self.is_inward(mu):
                sibs.append(mu)
            elif self.is_super(mu):
                (sibs if self.cycles(mu) else detached).append(mu)
            else:
                return None
        if len(roots) > 1:
            return None
        root = roots[0] if roots else None
        if not sibs:
            if root is not None:
                return None
            return CollapseEligibility(t, CollapseKind.TYPE_A, None, (), min(detached))
        xs = {self.inmost(mu) for mu in sibs}
        if len(xs) != 1:
            return None
        (x,) = xs
        seq = self.live_cycle_sequence(x)
        sibset = set(sibs)
        marks = []
        for o in seq:
            if o in sibset:
                marks.append((o, "T"))
            elif self.leaf_icts(o) - {t}:
                marks.append((o, "O"))
        if not all(o in {m for m, _ in marks} for o in sibset):
            return None
        flags = [f for _, f in marks]
        nt = flags.count("T")
        # the T marks must form one circular block once unrelated vertices are dropped
        starts = [i for i in range(len(flags)) if flags[i] == "T" and flags[i - 1] != "T"]
        if nt < len(flags) and len(starts) != 1:
            return None
        first = starts[0] if starts else 0
        run = []
        for i in range(len(flags)):
            o, f = marks[(first + i) % len(marks)]
            if f == "T" and o not in run:
                run.append(o)
        if len(run) != len(sibset):
            return None
        kind = CollapseKind.TYPE_B if root is not None else CollapseKind.TYPE_A
        return CollapseEligibility(t, kind, root, tuple(run), run[0])

    def collapse_eligible(self) -> list[CollapseEligibility]:
        order = sorted(self.alive_icts, key=lambda t: (-self.d.icts[t].level, t))
        return [e for e in (self.eligibility(t) for t in order) if e is not None]

    def collapse_tree(self, el: CollapseEligibility) -> int:
        """Contract an eligible tree and record its reassembling fragment."""
        now = self.eligibility(el.ict)
        if now is None:
            raise NotEligible(f"tree {el.ict} is not eligible for collapse")
        ict = self.d.icts[el.ict]
        tedges = set(ict.edges)
        internal = set(ict.internal)
        g, mg, b = self.g, self.mg, self.builder

        start = now.start
        first = next(e for e, _ in mg.rings[start] if e in tedges)
        fa, fb = g.edges[first]
        v1 = fb if mg.owner(fa) == start else fa

        def other_end(e: int, v: int) -> int:
            a, c = g.edges[e]
            return c if a == v else a

        # iterative post-order over the tree: node v, then left then right subtree
        result: dict[int, int] = {}
        # tree vertices under each fragment node, kept only for the check below
        spans: dict[int, frozenset[int]] = {}
        frags: list[frozenset[int]] = []
        stack: list[tuple[int, int, bool]] = [(v1, first, False)]
        while stack:
            v, arrive, done = stack.pop()
            if v not in internal:
                result[v] = self.node_of[mg.owner(v)]
                spans[v] = frozenset((v,))
                continue
            ring = [e for e, _ in mg.rings[v]]
            i = ring.index(arrive)
            left, right = ring[(i + 1) % 3], ring[(i + 2) % 3]
            lv, rv = other_end(left, v), other_end(right, v)
            if not done:
                stack.append((v, arrive, True))
                stack.append((rv, right, False))
                stack.append((lv, left, False))
                continue
            inner = b.join(self.node_of[v], result[lv])
            result[v] = b.join(inner, result[rv])
            spans[v] = frozenset((v,)) | spans[lv] | spans[rv]
            frags += [frozenset((v,)) | spans[lv], spans[v]]
        top = b.join(self.node_of[start], result[v1])
        if self.check:
            for span in frags:
                out = sum(1 for e in tedges if (g.edges[e][0] in span) != (g.edges[e][1] in span))
                if out > 3:
                    raise EngineStuck(f"collapse fragment of tree {el.ict} cuts {out} tree edges")

        new = mg.contract(tedges)
        self.node_of[new] = top
        self.alive_icts.discard(el.ict)
        self.trace.events.append(CollapseEvent(self.round_no, el.ict, now.kind.value, new))
        self._check_invariants()
        return new

    # -- merges ----------------------------------------------------------------

    def merge_action(self, phi: int) -> MergeAction | None:
        """The single merge available to super vertex ``phi``, if any."""
        if phi not in self.mg.rings or not self.is_super(phi):
            return None
        if self.mg.loops(phi):
            return MergeAction(phi, phi, 5)
        if self.leaf_icts(phi):
            return None
        mu = self.cw_neighbor(phi)
        if mu is None or mu == phi:
            return None
        if not self.is_super(mu):
            if self.is_inward(mu):
                case = 1
            elif self.is_outward(mu) and self.cw_neighbor(mu) == phi:
                case = 2
            else:
                return None
        else:
            case = 4 if self.cw_neighbor(mu) == phi else 3
        if self.lifted and not self._arc_guard(phi, mu):
            return None
        return MergeAction(phi, mu, case)

    def _arc_guard(self, phi: int, mu: int) -> bool:
        """True when every cycle stays cut at most twice by the merged bag."""
        inside = set(self.mg.members[phi]) | set(self.mg.members[mu])
        cut: dict[int, int] = {}
        for w in (phi, mu):
            for e, side in self.mg.rings[w]:
                c = self.cycle_of_edge.get(e)
                if c is None:
                    continue
                a, z = self.g.edges[e]
                if (a in inside) != (z in inside):
                    cut[c] = cut.get(c, 0) + 1
        return all(v <= 2 for v in cut.values())

    def merge_eligible(self) -> list[MergeAction]:
        out = []
        for v in self.mg.vertices():
            a = self.merge_action(v)
            if a is not None:
                out.append(a)
        return out

    def apply_merge(self, a: MergeAction) -> int:
        mg = self.mg
        if a.case == 5:
            loops = mg.contract_loops(a.phi)
            self.trace.events.append(MergeEvent(self.round_no, a.phi, a.phi, 5, tuple(loops), a.phi))
            self._check_invariants()
            return a.phi
        edges = mg.edges_between(a.phi, a.mu)
        if any(e not in self.cycle_of_edge for e in edges):
            raise EngineStuck(f"merge of {a.phi} and {a.mu} would contract a tree edge")
        new = mg.contract(edges)
        self.node_of[new] = self.builder.join(self.node_of[a.phi], self.node_of[a.mu])
        self.trace.events.append(MergeEvent(self.round_no, a.phi, a.mu, a.case, tuple(edges), new))
        self._check_invariants()
        return new

    # -- rounds ----------------------------------------------------------------

    def collapse_round(self) -> int:
        self.round_no += 1
        self.trace.events.append(RoundBoundary(self.round_no, "collapse"))
        done = 0
        for el in self.collapse_eligible():
            if self.eligibility(el.ict) is not None:
                self.collapse_tree(el)
                done += 1
        self._snapshot("collapse")
        return done

    def merge_round(self) -> int:
        self.round_no += 1
        self.trace.events.append(RoundBoundary(self.round_no, "merge"))
        done = 0
        for v in self.mg.vertices():
            if self.is_super(v) and self.mg.loops(v):
                self.apply_merge(MergeAction(v, v, 5))
                done += 1
        changed = True
        while changed:
            changed = False
            work = [v for v in self.mg.vertices() if self.is_super(v)]
            work.reverse()
            while work:
                phi = work.pop()
                while True:
                    a = self.merge_action(phi)
                    if a is None or a.case == 5:
                        break
                    phi = self.apply_merge(a)
                    done += 1
                    changed = True
        if self.check and any(self.mg.loops(v) for v in self.mg.vertices()):
            raise EngineStuck("self-loops survived a merge round")
        self._snapshot("merge")
        return done

    def finished(self) -> bool:
        return len(self.mg.rings) == 1 and not self.mg.alive

    def run(self) -> tuple[ReassemblyTree, KsTrace]:
        idle = 0
        while not self.finished():
            n_c = self.collapse_round()
            if self.finished():
                # the last round is always a merge round, possibly empty
                self.merge_round()
                break
            n_m = self.merge_round()
            idle = idle + 1 if n_c + n_m == 0 else 0
            if idle >= 1:
                raise EngineStuck(f"no operation applies after round {self.round_no}")
        (last,) = self.mg.rings
        return self.builder.build(self.node_of[last]), self.trace

    def _snapshot(self, kind: str) -> None:
        bags = [sorted(self.mg.members[v]) for v in self.mg.vertices()]
        self.trace.snapshots.append((self.round_no, kind, bags))

    # -- invariant checks --------------------------------------------------------

    def _check_invariants(self) -> None:
        if not self.check:
            return
        for t in self.alive_icts:
            if not set(self.d.icts[t].edges) <= self.mg.alive:
                raise EngineStuck(f"tree {t} lost an edge before its collapse")
        for e in self.mg.alive:
            if (e in self.cycle_of_edge) == (e in self.ict_of_edge):
                raise EngineStuck(f"edge {e} has no single designation")
            t = self.ict_of_edge.get(e)
            if t is not None and t not in self.alive_icts:
                raise EngineStuck(f"edge {e} of collapsed tree {t} is still live")
        parent = {c.id: c.parent for c in self.d.cycles}
        for v in self.mg.vertices():
            cs = sorted(self.cycles(v), key=lambda c: self.level_of_cycle[c])
            for a, b in zip(cs, cs[1:]):
                if self.level_of_cycle[b] != self.level_of_cycle[a] + 1 or parent[b] != a:
                    raise EngineStuck(f"cycles of vertex {v} do not form a nested chain")
        rounds = [e for e in self.trace.events if isinstance(e, RoundBoundary)]
        for r in rounds:
            if (r.round % 2 == 1) != (r.kind == "collapse"):
                raise EngineStuck("round parity broken")


def _biconnected(g: PlaneGraph) -> bool:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return g.n >= 3 and nx.is_biconnected(h)


def run_ks(g: PlaneGraph, *, check: bool = False) -> tuple[ReassemblyTree, KsTrace]:
    """Reassemble a biconnected 3-regular plane graph with alpha at most 2k."""
    if not _biconnected(g):
        raise NotBiconnected("input graph has a cut vertex or bridge")
    d = decompose(g)
    if d.k < 2:
        raise BadOuterplanarity(f"edge outerplanarity {d.k} is below 2")
    return ContractionState(g, d, check=check).run()


def run_ks_lifted(g: PlaneGraph, *, check: bool = False) -> tuple[ReassemblyTree, KsTrace]:
    """Variant for connected inputs that may contain bridges.

    Biconnected inputs take the plain path. Otherwise the engine runs once
    over the whole decomposition with two relaxations: a leaf bag that no
    longer meets any cycle imposes no ordering constraint, and a merge is
    refused if it would cut some cycle in more than two places.
    """
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    if g.n == 0 or not nx.is_connected(h):
        raise Disconnected("input graph is not connected")
    if _biconnected(g):
        return run_ks(g, check=check)
    d = decompose(g)
    return ContractionState(g, d, lifted=True, check=check).run()


def blocks(g: PlaneGraph) -> list[set[int]]:
    """Vertex sets of the biconnected components with at least three vertices."""
    h = nx.Graph()
    h.add_edges_from(g.edges)
    return sorted((set(c) for c in nx.biconnected_components(h) if len(c) > 2), key=min)


def collapse_eligible(s: ContractionState) -> list[CollapseEligibility]:
    return s.collapse_eligible()


def collapse_tree(s: ContractionState, e: CollapseEligibility) -> int:
    return s.collapse_tree(e)


def merge_eligible(s: ContractionState) -> list[MergeAction]:
    return s.merge_eligible()

from __future__ import annotations

import json

import pytest

from reasm.errors import Disconnected, NotBiconnected
from reasm.generators import bridged_cubes, figure_30v, gen_constant_density, gen_hfk
from reasm.ks_engine import (
    CollapseEvent,
    CollapseKind,
    ContractionState,
    MergeEvent,
    RoundBoundary,
    blocks,
    collapse_eligible,
    collapse_tree,
    merge_eligible,
    run_ks,
    run_ks_lifted,
)
from reasm.layering import decompose
from reasm.plane_graph import build_plane_graph
from reasm.reassembly import alpha_measure, validate_tree


def state(g, **kw):
    return ContractionState(g, decompose(g), **kw)


def test_cube_initial_collapses(cube_graph):
    s = state(cube_graph)
    el = collapse_eligible(s)
    assert len(el) == 4
    assert all(e.kind is CollapseKind.TYPE_B for e in el)


def test_cube_single_collapse(cube_graph):
    s = state(cube_graph)
    first = collapse_eligible(s)[0]
    new = collapse_tree(s, first)
    assert len(s.mg.members[new]) == 2
    assert s.mg.degree(new) == 4


def test_cube_merge_chain(cube_graph):
    s = state(cube_graph)
    s.collapse_round()
    assert merge_eligible(s)
    s.merge_round()
    size = {e.new: 2 for e in s.trace.events if isinstance(e, CollapseEvent)}
    merges = [e for e in s.trace.events if isinstance(e, MergeEvent)]
    for e in merges:
        size[e.new] = size[e.phi] + size[e.mu]
    assert [size[e.new] for e in merges] == [4, 6, 8]
    # each merge absorbs the previous result
    assert all(b.phi == a.new for a, b in zip(merges, merges[1:]))
    assert s.finished()


def test_ordinary_pair_has_no_merge(cube_graph):
    s = state(cube_graph)
    assert all(s.merge_action(v) is None for v in range(8))
    assert merge_eligible(s) == []


def test_loops_give_case_five():
    g, names = figure_30v()
    s = state(g)
    idx = {name: i for i, name in enumerate(names)}
    ei = g.edge_index()
    star = [ei[frozenset((idx["B9"], idx[x]))] for x in ("A9", "A10", "A12")]
    phi = s.mg.contract(star)
    assert s.mg.loops(phi)
    a = s.merge_action(phi)
    assert a is not None and a.case == 5 and a.mu == phi
    s.apply_merge(a)
    assert not s.mg.loops(phi)
    assert phi in s.mg.rings


def test_collapse_degree_bounds():
    for g in (gen_hfk(3, 5), gen_hfk(4, 7), gen_constant_density(5, 3)):
        s = state(g)
        while not s.finished():
            for el in s.collapse_eligible():
                if s.eligibility(el.ict) is None:
                    continue
                el = s.eligibility(el.ict)
                leaves = {s.mg.owner(v) for v in s.d.icts[el.ict].leaves}
                top = max(s.mg.degree(v) for v in leaves)
                new = s.collapse_tree(el)
                extra = 2 if el.kind is CollapseKind.TYPE_B else 0
                assert s.mg.degree(new) <= top + extra
            if s.finished():
                break
            s.merge_round()


def test_ks_alpha_on_cube(cube_graph):
    t, trace = run_ks(cube_graph, check=True)
    assert validate_tree(cube_graph, t)
    assert alpha_measure(cube_graph, t).alpha == 4
    assert trace.rounds == 2


@pytest.mark.parametrize("k", [2, 3, 4, 5])
@pytest.mark.parametrize("f", [3, 4, 9])
def test_ks_tight_on_h_family(k, f):
    g = gen_hfk(k, f)
    t, _ = run_ks(g, check=True)
    assert alpha_measure(g, t).alpha == 2 * k


def test_round_parity_and_events(cube_graph):
    g = gen_hfk(3, 6)
    _, trace = run_ks(g)
    bounds = [e for e in trace.events if isinstance(e, RoundBoundary)]
    assert [b.kind for b in bounds][:2] == ["collapse", "merge"]
    assert bounds[-1].kind == "merge"
    made = [e for e in trace.events if isinstance(e, CollapseEvent) or (isinstance(e, MergeEvent) and e.case != 5)]
    assert len(made) == g.n - 1
    json.dumps(trace.to_json())


def test_ks_is_deterministic():
    g = gen_hfk(4, 7)
    a = json.dumps(run_ks(g)[1].to_json(), sort_keys=True)
    b = json.dumps(run_ks(g)[1].to_json(), sort_keys=True)
    assert a == b


def test_ks_input_checks(cube_graph):
    g30, _ = figure_30v()
    with pytest.raises(NotBiconnected):
        run_ks(g30)
    k4 = build_plane_graph([(0, 0), (4, 0), (2, 4), (2, 1.5)], [(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)])
    # a simple cubic graph always peels into at least two layers
    assert decompose(k4).k == 2
    t, _ = run_ks(k4, check=True)
    assert alpha_measure(k4, t).alpha <= 4


def test_lifted_on_30v():
    g, _ = figure_30v()
    t, _ = run_ks_lifted(g, check=True)
    assert validate_tree(g, t)
    assert alpha_measure(g, t).alpha <= 2 * decompose(g).k
    parts = blocks(g)
    assert len(parts) == 4
    for part in parts:
        ids = sorted(part)
        pos = {v: i for i, v in enumerate(ids)}
        sub = build_plane_graph(
            [g.coords[v] for v in ids],
            [(pos[u], pos[v]) for u, v in g.edges if u in part and v in part],
            cubic=False,
        )
        assert decompose(sub).k <= 3


def test_lifted_matches_plain_on_biconnected():
    g = gen_hfk(3, 5)
    assert run_ks_lifted(g)[0].cluster_family() == run_ks(g)[0].cluster_family()


def test_lifted_bridged_cubes():
    g = bridged_cubes()
    t, _ = run_ks_lifted(g, check=True)
    assert validate_tree(g, t)
    assert alpha_measure(g, t).alpha == 4


def test_lifted_rejects_disconnected():
    coords = [(0, 0), (2, 0), (1, 2), (10, 0), (12, 0), (11, 2)]
    g = build_plane_graph(coords, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], cubic=False)
    with pytest.raises(Disconnected):
        run_ks_lifted(g)

from __future__ import annotations

import math

import networkx as nx
import pytest

from reasm.errors import BadParams, DegreeTooLow, WrongFamily
from reasm.generators import (
    HFamilyParams,
    corpus_entry,
    expand_to_three_regular,
    figure_30v,
    figure_four_regular,
    gen_constant_density,
    gen_hfk,
    hfk_positions,
    inside_out_reassemble,
    load_corpus,
    x_id,
    y_id,
)
from reasm.ks_engine import run_ks
from reasm.layering import cacti_check, decompose
from reasm.plane_graph import build_plane_graph
from reasm.reassembly import alpha_measure, boundaries, validate_tree


def nxg(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def test_hfk_sizes():
    g = gen_hfk(4, 7)
    assert g.n == 42 == 2 * 3 * 7
    assert decompose(g).k == 4
    assert HFamilyParams(4, 9).dense and not HFamilyParams(4, 8).dense


def test_hfk_k2_is_the_cube(cube_graph):
    g = gen_hfk(2, 4)
    assert g.n == 8
    assert nx.is_isomorphic(nxg(g), nxg(cube_graph))


@pytest.mark.parametrize("k,f", [(2, 2), (1, 5)])
def test_hfk_bad_params(k, f):
    with pytest.raises(BadParams):
        gen_hfk(k, f)


def test_hfk_positions_and_ids():
    k, f = 3, 5
    g = gen_hfk(k, f)
    level, pos = hfk_positions(k, f)
    assert sorted(set(level)) == [0, 1, 2]
    assert len({x_id(k, f, i, j) for i in range(1, k) for j in range(1, f + 1)}) == (k - 1) * f
    assert set(range(g.n)) == {x_id(k, f, i, j) for i in range(1, k) for j in range(1, f + 1)} | {
        y_id(k, f, i, j) for i in range(1, k) for j in range(1, f + 1)
    }
    # every vertex lies on the circle of its level
    radii = {}
    for v in range(g.n):
        radii.setdefault(level[v], set()).add(round(math.hypot(*g.coords[v]), 6))
    assert all(len(r) == 1 for r in radii.values())
    assert all(len(r) == 3 for r in g.rings)


def test_constant_density():
    g = gen_constant_density(5, 3)
    assert g.n == 24
    prism = gen_constant_density(2, 3)
    assert prism.n == 6
    assert nx.is_isomorphic(nxg(prism), nx.circular_ladder_graph(3))
    with pytest.raises(BadParams):
        gen_constant_density(3, 2)


def test_inside_out_c3_k5():
    g = gen_constant_density(5, 3)
    t = inside_out_reassemble(g)
    assert validate_tree(g, t)
    assert alpha_measure(g, t).alpha == 5
    bd = boundaries(g, t)
    seq = []
    x = t.root
    while not t.is_leaf(x):
        seq.append(bd[x])
        a, b = t.children[x]
        x = b if t.is_leaf(a) else a
    seq.reverse()
    assert seq[:8] == [4, 3, 4, 5, 4, 5, 4, 3]
    assert alpha_measure(g, run_ks(g)[0]).alpha == 10


def test_inside_out_prism():
    g = gen_constant_density(2, 3)
    assert alpha_measure(g, inside_out_reassemble(g)).alpha <= 5


def test_inside_out_wrong_family():
    g, _ = figure_30v()
    with pytest.raises(WrongFamily):
        inside_out_reassemble(g)


def test_expand_degree_five_star():
    import math as m

    coords = [(0.0, 0.0)] + [(10 * m.sin(2 * m.pi * i / 5), 10 * m.cos(2 * m.pi * i / 5)) for i in range(5)]
    # outer pentagon keeps every outer vertex at degree 3
    edges = [(0, i) for i in range(1, 6)] + [(i, i % 5 + 1) for i in range(1, 6)]
    g = build_plane_graph(coords, edges, cubic=False)
    h = expand_to_three_regular(g)
    assert h.n == 10 and all(len(r) == 3 for r in h.rings)
    hub = list(range(5))
    hub_edges = [e for e in h.edges if e[0] in hub and e[1] in hub]
    assert len(hub_edges) == 5
    assert nx.is_isomorphic(nxg(h).subgraph(hub), nx.cycle_graph(5))


def test_expand_identity_on_cubic(cube_graph):
    assert expand_to_three_regular(cube_graph) is cube_graph


def test_expand_rejects_low_degree():
    g = build_plane_graph([(0, 0), (1, 0)], [(0, 1)], cubic=False)
    with pytest.raises(DegreeTooLow):
        expand_to_three_regular(g)


def test_expand_four_regular_figure():
    g4, _ = figure_four_regular()
    assert g4.n == 12 and all(len(r) == 4 for r in g4.rings)
    h = expand_to_three_regular(g4)
    assert h.n == 48
    build_plane_graph(h.coords, h.edges, check_crossings=True)
    assert cacti_check(decompose(h), h)


def test_corpus():
    entries = {e.name: e for e in load_corpus()}
    assert entries["cube"].graph.n == 8 and decompose(entries["cube"].graph).k == 2
    d = decompose(entries["fig-3reg-30v"].graph)
    assert (d.k, len(d.cycles), len(d.icts)) == (4, 6, 11)
    assert entries["hfk-4-7"].graph.n == 42
    for e in entries.values():
        for key, want in e.expected.items():
            if want is None:
                continue
            d = decompose(e.graph)
            got = {"n": e.graph.n, "k": d.k, "cycles": len(d.cycles), "icts": len(d.icts)}.get(key)
            if got is not None:
                assert got == want, (e.name, key)
    with pytest.raises(BadParams):
        corpus_entry("nope")

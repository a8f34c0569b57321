from __future__ import annotations

from dataclasses import replace

import pytest

from reasm.errors import Disconnected
from reasm.generators import figure_30v, gen_hfk, load_corpus
from reasm.layering import (
    EdgeLayer,
    VertexClass,
    cacti_check,
    decompose,
    edge_outerplanarity,
    vertex_outerplanarity_bounds,
)
from reasm.plane_graph import build_plane_graph


def test_cube_layers(cube_graph):
    d = decompose(cube_graph)
    assert d.k == 2
    outer = {cube_graph.edge_index()[frozenset(e)] for e in [(0, 1), (1, 2), (2, 3), (3, 0)]}
    spokes = {cube_graph.edge_index()[frozenset((i, i + 4))] for i in range(4)}
    assert d.layers[0].cycle_edges == outer
    assert d.layers[0].ict_edges == frozenset()
    assert d.layers[1].ict_edges == spokes
    assert len(d.layers[1].cycle_edges) == 4
    assert [c.level for c in d.cycles] == [0, 1]
    assert d.cycles[1].parent == 0
    assert len(d.icts) == 4 and all(len(t.leaves) == 2 for t in d.icts)
    assert all(d.vertex_class[v] is VertexClass.INWARD for v in range(4))
    assert all(d.vertex_class[v] is VertexClass.OUTWARD for v in range(4, 8))


def test_cycle_rings_are_clockwise(cube_graph):
    d = decompose(cube_graph)
    assert d.cycles[0].vertices == (0, 3, 2, 1)


def test_figure_30v():
    g, names = figure_30v()
    d = decompose(g)
    assert (d.k, len(d.cycles), len(d.icts)) == (4, 6, 11)
    assert cacti_check(d, g)
    assert [c.level for c in d.cycles] == [0, 0, 0, 1, 1, 2]
    inner = d.cycles[-1]
    assert {names[v] for v in inner.vertices} == {"C1", "C2", "C3", "C4"}
    # the last layer is only the star at D, enclosed by the innermost square
    (star,) = [t for t in d.icts if t.level == 3]
    assert {names[v] for v in star.internal} == {"D"}
    assert star.enclosing == inner.id
    # the three outer blocks are tied together by one level-0 tree
    (bridge,) = [t for t in d.icts if t.level == 0]
    assert {names[v] for v in bridge.leaves} == {"A2", "A5", "A11"}


def test_empty_graph():
    g = build_plane_graph([(0, 0), (1, 0)], [], cubic=False)
    d = decompose(g)
    assert d.k == 0 and d.layers == ()
    assert cacti_check(d, g)
    assert vertex_outerplanarity_bounds(d) == (0, 0)


def test_disconnected_rejected():
    coords = [(0, 0), (2, 0), (1, 2), (10, 0), (12, 0), (11, 2)]
    edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]
    with pytest.raises(Disconnected):
        decompose(build_plane_graph(coords, edges, cubic=False))


def test_outerplanarity_values(cube_graph):
    assert edge_outerplanarity(cube_graph) == 2
    assert edge_outerplanarity(gen_hfk(4, 7)) == 4
    assert vertex_outerplanarity_bounds(decompose(gen_hfk(4, 7))) == (3, 4)
    assert vertex_outerplanarity_bounds(decompose(cube_graph)) == (1, 2)


def test_cacti_on_corpus():
    for entry in load_corpus():
        d = decompose(entry.graph)
        assert cacti_check(d, entry.graph), entry.name
        if entry.expected.get("k") is not None:
            assert d.k == entry.expected["k"], entry.name


def test_cacti_detects_moved_edge(cube_graph):
    d = decompose(cube_graph)
    layer = d.layers[1]
    e = min(layer.cycle_edges)
    moved = EdgeLayer(1, layer.cycle_edges - {e}, layer.ict_edges | {e})
    bad = replace(d, layers=(d.layers[0], moved))
    assert not cacti_check(bad, cube_graph)


def test_json_shape(cube_graph):
    data = decompose(cube_graph).to_json(cube_graph)
    assert data["k"] == 2
    assert len(data["layers"]) == 2
    assert data["inward"] == [0, 1, 2, 3]

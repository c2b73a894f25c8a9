import math

import pytest

from qgs.graph import (
    InvalidGraphError, MetricGraph, UnknownVertexError, combinatorial_neighborhood,
    require_valid, validate, weights,
)

from conftest import path_graph, star


def codes(g):
    return [d.code for d in validate(g)]


def test_single_edge_is_valid():
    assert validate(MetricGraph.build([("u", "v", 1.0)])) == []


def test_two_components():
    g = MetricGraph.build([("u", "v", 1.0), ("w", "x", 1.0)])
    assert codes(g) == ["NotConnected"]


def test_loop_reported():
    g = MetricGraph.build([("u", "u", 1.0)])
    assert "LoopAt" in codes(g)
    assert validate(g)[0].subject == "u"


@pytest.mark.parametrize("length,code", [(0.0, "NonPositiveLength"), (-1.0, "NonPositiveLength"),
                                         (math.inf, "NonFiniteLength"), (math.nan, "NonFiniteLength")])
def test_bad_lengths(length, code):
    assert code in codes(MetricGraph.build([("u", "v", length)]))


def test_multi_edge_and_duplicate_id():
    g = MetricGraph.build([("a", "u", "v", 1.0), ("a", "v", "u", 2.0)])
    assert {"DuplicateId", "MultiEdge"} <= set(codes(g))


def test_isolated_vertex():
    g = MetricGraph.build([("u", "v", 1.0)], vertices=["u", "v", "w"])
    assert "IsolatedVertex" in codes(g)
    with pytest.raises(InvalidGraphError) as info:
        require_valid(g)
    assert info.value.diagnostics


def test_edge_weights():
    w = weights(MetricGraph.build([("u", "v", 2.5)]))
    assert w.m.tolist() == [2.5, 2.5]
    assert w.b_of("u", "v") == pytest.approx(0.4)
    assert w.Deg.tolist() == pytest.approx([1 / 2.5**2] * 2)


def test_star_weights():
    g = star([1, 1, 1])
    w = weights(g)
    c = g.index["c"]
    assert w.m[c] == 3 and w.Deg[c] == 1
    assert all(w.m[g.index[f"l{i}"]] == 1 for i in range(3))


def test_neighborhoods():
    p = path_graph([1, 1])
    assert combinatorial_neighborhood(p, {"2"}) == {"1", "2", "3"}
    assert combinatorial_neighborhood(p, set()) == set()
    s = star([1, 1, 1])
    assert combinatorial_neighborhood(s, {"l0"}) == {"l0", "c"}
    with pytest.raises(UnknownVertexError):
        combinatorial_neighborhood(p, {"nope"})


def test_with_alpha_and_subgraph():
    g = path_graph([1, 2]).with_alpha({"2": -3.0})
    assert g.alpha_of("2") == -3.0 and g.alpha_of("1") == 0.0
    sub = g.subgraph({"1", "2"})
    assert sub.vertices == ("1", "2") and len(sub.edges) == 1
    assert g.total_length() == 3
    assert not g.is_equilateral()

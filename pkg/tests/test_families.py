import math

import pytest

from qgs import families as F
from qgs.graph import validate


def test_delta_line_prefix():
    g = F.generate(F.delta_line(), 3)
    assert g.n == 4 and [e.length for e in g.edges] == [1, 1, 1]
    assert validate(g) == []


def test_lattice_box_counts():
    g = F.generate(F.lattice_box(2, sides=(3, 3)), 3)
    assert (g.n, len(g.edges)) == (9, 12)


def test_generation_is_deterministic():
    f = F.example_tree()
    assert F.generate(f, 4) == F.generate(f, 4)


def test_depth_limit():
    with pytest.raises(F.DepthLimitError):
        F.generate(F.example_tree(), 50)


def test_binary_tree_shells():
    p = F.prefix(F.binary_tree(), 4)
    counts = {}
    for s in p.shells.values():
        counts[s] = counts.get(s, 0) + 1
    assert counts == {k: 2**k for k in range(5)}


def test_example_tree_children_grow():
    p = F.prefix(F.example_tree(), 3)
    # shell k vertices spawn k + 2 children, exactly one of them on a short edge
    for v, k in p.shells.items():
        if k < 3:
            kids = [e for e in p.graph.incident[v] if p.shells[e.other(v)] == k + 1]
            assert len(kids) == k + 2
            assert sorted(e.length for e in kids)[0] == pytest.approx(1 / (k + 2))


class TestTailAlgebra:
    def test_predicates(self):
        assert F.geometric(0.5).asymptotic().summable()
        assert not F.harmonic().asymptotic().summable()
        assert F.harmonic().asymptotic().tends_to_zero()
        assert F.power(2.0).asymptotic().unbounded()
        assert F.constant(3).asymptotic().inf_positive()

    def test_products(self):
        h = F.harmonic().asymptotic()
        assert (h * h).summable()
        assert (h ** 0.5).tends_to_zero()
        assert not (h ** 0.5 * h ** 0.5).summable()

    def test_cancellation_is_unknown(self):
        a = F.constant(1).asymptotic()
        assert (a - a) is None

    def test_values_match_closed_form(self):
        for rule in (F.geometric(0.3, 2.0), F.harmonic(), F.power(-0.5, offset=1.0)):
            assert rule.check(50)
        assert F.geometric(0.5)(3) == pytest.approx(0.125)
        assert F.harmonic()(4) == pytest.approx(0.25)

    def test_unknown_tail(self):
        r = F.SeqRule("unknown", values=lambda k: math.sin(k) ** 2 + 1)
        assert r.asymptotic() is None

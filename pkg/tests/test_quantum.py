import math

import numpy as np
import pytest
from scipy.optimize import brentq

from qgs.graph import MetricGraph
from qgs.laplacian import assemble
from qgs.quantum import (
    PoleProximity, correspondence_report, counting_function, eigenvalues_below, fem_discretize,
    fem_eigen, kappa_minus_quantum, richardson, secular_matrix,
)

from conftest import path_graph, seeded_graphs, star


def test_secular_at_zero_single_edge():
    for ell in (0.3, 1.0, 2.0):
        S = secular_matrix(MetricGraph.build([("u", "v", ell)]), 0.0)
        np.testing.assert_allclose(S, np.array([[1, -1], [-1, 1]]) / ell, rtol=1e-15)


def test_secular_is_continuous_through_zero():
    g = star([0.7, 1.1, 1.3], {"c": -2.0, "l0": 0.5})
    S0 = secular_matrix(g, 0.0)
    for eps in (1e-6, -1e-6):
        np.testing.assert_allclose(secular_matrix(g, eps), S0, atol=1e-5)


def test_pole_guard():
    g = MetricGraph.build([("u", "v", 1.0)])
    with pytest.raises(PoleProximity):
        secular_matrix(g, math.pi**2 * (1 + 1e-9))


def test_neumann_interval():
    g = MetricGraph.build([("u", "v", math.pi)])
    res = eigenvalues_below(g, 16.5)
    np.testing.assert_allclose(res.eigenvalues, [0, 1, 4, 9, 16], atol=1e-8)
    assert res.kappa_minus == 0
    # every positive one sits on a Dirichlet pole of the edge
    assert res.near_pole == [False, True, True, True, True]


def test_delta_midpoint():
    g = path_graph([1.0, 1.0], {"2": -2.0})
    res = eigenvalues_below(g, 0.0)
    kappa = brentq(lambda k: 2 * k * math.tanh(k) - 2, 0.1, 5)
    assert res.kappa_minus == 1
    assert math.sqrt(-res.eigenvalues[0]) == pytest.approx(kappa, abs=1e-10)


def test_star_against_fem():
    g = star([0.7, 1.1, 1.3], {"c": -1.0})
    sec = eigenvalues_below(g, 40.0)
    assert not sec.flags & {"count-mismatch"}
    fem = fem_eigen(fem_discretize(g, 0.01)).eigenvalues[: len(sec.eigenvalues)]
    np.testing.assert_allclose(sec.eigenvalues, fem, rtol=2e-3, atol=2e-4)


def test_counting_function_monotone():
    g = seeded_graphs(1, 99)[0]
    counts = [counting_function(g, lam) for lam in np.linspace(-50, 50, 101) if lam != 0]
    assert counts == sorted(counts)


def test_spectrum_rows():
    rows = eigenvalues_below(MetricGraph.build([("u", "v", math.pi)]), 5.0).to_rows()
    assert [r["index"] for r in rows] == [0, 1, 2]
    assert rows[1]["flags"] == "near-pole"
    assert rows[0]["bracket_lo"] <= rows[0]["lam"] <= rows[0]["bracket_hi"]


def test_fem_refinement_monotone():
    g = star([0.7, 1.1, 1.3], {"c": -1.0, "l1": 2.0})
    coarse = fem_eigen(fem_discretize(g, 0.2)).eigenvalues[:8]
    fine = fem_eigen(fem_discretize(g, 0.1)).eigenvalues[:8]
    assert np.all(fine <= coarse + 1e-12)


def test_fem_ground_state_symmetric():
    g = MetricGraph.build([("u", "v", 1.0)], {"u": -1, "v": -1})
    res, V = fem_eigen(fem_discretize(g, 0.05), count=1, vectors=True)
    f = V[:, 0]
    assert abs(abs(f[0]) - abs(f[1])) < 1e-8


def test_nonnegative_coupling_has_no_negative_spectrum():
    for g in seeded_graphs(10, 3, alpha_range=(0.0, 5.0)):
        assert kappa_minus_quantum(g).value == 0


def test_kirchhoff_correspondence():
    for g in seeded_graphs(10, 8, alpha_range=(0.0, 0.0)):
        rep = correspondence_report(g)
        assert rep["kappa_minus_quantum"] == rep["kappa_minus_discrete"] == 0
        assert rep["positivity_discrete"] == rep["positivity_quantum"] == "nonnegative"
        assert rep["agree"]


def test_edge_report():
    rep = correspondence_report(MetricGraph.build([("u", "v", 1.0)], {"u": -1, "v": -1}))
    assert rep["agree"] and rep["kappa_minus_quantum"] == 1 == rep["kappa_minus_discrete"]


def test_richardson_removes_h2_term():
    exact, c = 2.0, 0.3
    assert richardson(exact + c * 0.04, exact + c * 0.01) == pytest.approx(exact)


def test_s0_matches_weighted_matrix():
    for g in seeded_graphs(5, 12):
        op = assemble(g)
        np.testing.assert_allclose(secular_matrix(g, 0.0), np.diag(op.measure) @ op.dense(), rtol=1e-14)

"""Invariants over randomly drawn graphs."""
import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from qgs.corpus import random_graph, random_tree
from qgs.estimates import cheeger_bound_check, heat_decay, isoperimetric
from qgs.laplacian import assemble, eigen, quadratic_form
from qgs.metrics import RULES, is_intrinsic, path_metric
from qgs.quantum import secular_matrix

SETTINGS = settings(max_examples=60, deadline=None, derandomize=True,
                    suppress_health_check=[HealthCheck.too_slow])

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def graph_of(seed, **kw):
    return random_graph(np.random.default_rng(seed), **kw)


@SETTINGS
@given(seeds)
def test_weighted_symmetry(seed):
    op = assemble(graph_of(seed))
    A = np.diag(op.measure) @ op.dense()
    assert np.max(np.abs(A - A.T)) <= 1e-12 * np.max(np.abs(A))


@SETTINGS
@given(seeds)
def test_similar_spectra(seed):
    op = assemble(graph_of(seed))
    w = np.sort(np.linalg.eigvals(op.dense()).real)
    ref = eigen(op).eigenvalues
    assert np.allclose(w, ref, atol=1e-9 * np.max(np.abs(ref)))


@SETTINGS
@given(seeds, st.integers(0, 2**31))
def test_form_identity(seed, fseed):
    g = graph_of(seed)
    op = assemble(g)
    f = np.random.default_rng(fseed).normal(size=g.n)
    lhs = float(np.dot(op.measure * (op.dense() @ f), f))
    rhs = quadratic_form(op, f)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs), float(np.sum(op.measure * f * f)))


@SETTINGS
@given(seeds)
def test_secular_at_zero(seed):
    g = graph_of(seed)
    op = assemble(g)
    ref = np.diag(op.measure) @ op.dense()
    assert np.max(np.abs(secular_matrix(g, 0.0) - ref)) <= 1e-14 * np.max(np.abs(ref))


@SETTINGS
@given(seeds, st.floats(0.05, 30.0), st.floats(0.05, 30.0))
def test_secular_decreasing_on_negative_axis(seed, k1, k2):
    g = graph_of(seed)
    lo, hi = -max(k1, k2) ** 2, -min(k1, k2) ** 2
    diff = secular_matrix(g, lo) - secular_matrix(g, hi)
    scale = max(1.0, np.max(np.abs(secular_matrix(g, lo))))
    assert np.linalg.eigvalsh(diff)[0] >= -1e-12 * scale


@SETTINGS
@given(seeds, st.sampled_from(RULES))
def test_triangle_inequality(seed, rule):
    D = path_metric(graph_of(seed), rule).matrix()
    viol = D[:, None, :] - (D[:, :, None] + D[None, :, :])
    assert np.max(viol) <= 1e-12 * np.max(D)


@SETTINGS
@given(seeds)
def test_natural_below_m_metric(seed):
    g = graph_of(seed)
    assert np.all(path_metric(g, "natural").matrix() <= path_metric(g, "m_sum").matrix() + 1e-12)


@SETTINGS
@given(seeds, st.integers(2, 15))
def test_natural_metric_zero_slack_on_trees(seed, n):
    g = random_tree(np.random.default_rng(seed), n)
    rep = is_intrinsic(g, path_metric(g, "natural"))
    assert rep.intrinsic and abs(rep.worst_slack) <= 1e-12


@SETTINGS
@given(seeds, st.floats(0.0, 5.0))
def test_coupling_monotone(seed, shift):
    g = graph_of(seed)
    bigger = g.with_alpha([a + shift for a in g.alpha])
    assert eigen(assemble(bigger)).kappa_minus <= eigen(assemble(g)).kappa_minus


@SETTINGS
@given(seeds, st.integers(0, 2**31))
def test_cheeger_and_greedy(seed, dseed):
    g = graph_of(seed, max_vertices=12)
    rng = np.random.default_rng(dseed)
    dom = list(rng.choice(g.vertices, size=int(rng.integers(1, g.n)), replace=False))
    chk = cheeger_bound_check(g, dom)
    assert chk.holds
    assert isoperimetric(g, dom, method="greedy").constant >= chk.constant - 1e-15


@SETTINGS
@given(seeds)
def test_heat_bound_nonincreasing(seed):
    fit = heat_decay(graph_of(seed), np.geomspace(1e-3, 1e3, 40), saturation_factor=1.0)
    assert np.all(np.diff(fit.g) <= 1e-12 * fit.g[0])

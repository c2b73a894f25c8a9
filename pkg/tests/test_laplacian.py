import math

import numpy as np
import pytest

from qgs.graph import MetricGraph
from qgs.laplacian import (
    assemble, degree_weighted_variant, eigen, jacobi_eigvalsh, jacobi_from_points, kappa_minus,
    path_graph_from_points, quadratic_form, triplets_csv, vertex_table_csv,
)

from conftest import seeded_graphs


def edge(length=1.0, alpha=None):
    return MetricGraph.build([("u", "v", length)], alpha)


@pytest.mark.parametrize("ell", [0.5, 1.0, 3.0])
def test_single_edge_matrix(ell):
    op = assemble(edge(ell))
    np.testing.assert_allclose(op.dense(), np.array([[1, -1], [-1, 1]]) / ell**2)
    np.testing.assert_allclose(eigen(op).eigenvalues, [0, 2 / ell**2], atol=1e-14)


def test_negative_coupling_edge():
    op = assemble(edge(1.0, {"u": -1, "v": -1}))
    np.testing.assert_array_equal(op.dense_symmetrized(), [[0, -1], [-1, 0]])
    sp = eigen(op)
    np.testing.assert_allclose(sp.eigenvalues, [-1, 1])
    assert sp.kappa_minus == 1 == kappa_minus(op)


def test_form_examples():
    op = assemble(edge())
    assert quadratic_form(op, [3.0, 3.0]) == 0
    assert quadratic_form(op, [1.0, 0.0]) == 1
    with pytest.raises(ValueError):
        quadratic_form(op, [1.0])


def test_degree_variant_examples():
    op = degree_weighted_variant(edge(2.0))
    np.testing.assert_allclose(op.dense(), [[0.5, -0.5], [-0.5, 0.5]])
    g = MetricGraph.build([("a", "b", 1), ("b", "c", 1), ("c", "a", 1), ("c", "d", 1)])
    np.testing.assert_array_equal(degree_weighted_variant(g).dense(), assemble(g).dense())


def test_equilateral_jacobi():
    j = jacobi_from_points(np.arange(8.0))
    np.testing.assert_allclose(j.a, 1.0, rtol=0, atol=1e-15)
    assert j.b[0] == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    np.testing.assert_allclose(j.b[1:-1], 0.5, atol=1e-15)


def test_points_validation():
    with pytest.raises(ValueError):
        path_graph_from_points([0, 1, 1])
    with pytest.raises(ValueError):
        path_graph_from_points([1, 2])
    with pytest.raises(ValueError):
        path_graph_from_points([0, 1], [1.0, 0.0])


def test_sparse_and_dense_agree():
    line = path_graph_from_points(np.cumsum(np.r_[0, np.linspace(0.3, 1.7, 700)]))
    op = assemble(line)
    assert op.is_sparse
    w = eigen(op).eigenvalues
    assert w[0] == pytest.approx(0, abs=1e-9)
    assert np.all(np.diff(w) >= -1e-12)


def test_jacobi_solver_matches_lapack():
    for g in seeded_graphs(10, 5):
        A = assemble(g).dense_symmetrized()
        np.testing.assert_allclose(jacobi_eigvalsh(A), np.linalg.eigvalsh(A), atol=1e-10 * np.abs(A).max())
        assert eigen(assemble(g), method="jacobi").kappa_minus == eigen(assemble(g)).kappa_minus


def test_csv_outputs():
    op = assemble(edge(2.0, {"u": 1.0}))
    text = triplets_csv(op)
    assert text.splitlines()[0] == "row_id,col_id,value"
    assert "u,v,-0.25" in text
    assert vertex_table_csv(op).splitlines()[1] == "u,2.0,1.0"

"""Weighted discrete Laplacian h_alpha of a metric graph.

The primary representation acts in l2(V; m):

    (H f)(v) = (sum_u b(u, v) (f(v) - f(u)) + alpha(v) f(v)) / m(v)

with m(v) the sum of incident edge lengths and b(u, v) = 1/|e_uv|. The
symmetric l2(V) representation is derived from it as U H U^-1, U = sqrt(m).
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .graph import MetricGraph, require_valid, _weights

SPARSE_THRESHOLD = 500
MAX_DENSE = 5000
ZERO_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class WeightedOperator:
    """Matrix of h_alpha in l2(V; measure) plus its symmetrized form.

    ``edges`` holds (i, j, b_ij) once per edge and is what the form-sum in
    :func:`quadratic_form` runs over, independently of the matrix entries.
    """

    basis: tuple[str, ...]
    measure: np.ndarray
    alpha: np.ndarray
    edges: tuple[tuple[int, int, float], ...]
    H: np.ndarray | sp.csr_matrix
    symmetrized: np.ndarray | sp.csr_matrix

    @property
    def n(self) -> int:
        return len(self.basis)

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.H)

    def dense(self) -> np.ndarray:
        return self.H.toarray() if self.is_sparse else np.asarray(self.H)

    def dense_symmetrized(self) -> np.ndarray:
        S = self.symmetrized
        return S.toarray() if sp.issparse(S) else np.asarray(S)

    def form_matrix(self) -> np.ndarray:
        """diag(measure) @ H, the Gram matrix of the quadratic form."""
        return self.measure[:, None] * self.dense()


def _build(g: MetricGraph, measure: np.ndarray) -> WeightedOperator:
    n = g.n
    ix = g.index
    alpha = np.asarray(g.alpha, dtype=float)
    edges = tuple((ix[e.tail], ix[e.head], 1.0 / e.length) for e in g.edges)
    diag = alpha.copy()
    rows, cols, vals = [], [], []
    for i, j, b in edges:
        diag[i] += b
        diag[j] += b
        rows += [i, j]
        cols += [j, i]
        vals += [-b / measure[i], -b / measure[j]]
    rows += list(range(n))
    cols += list(range(n))
    vals += list(diag / measure)
    H = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    s = np.sqrt(measure)
    Hs = sp.diags(s) @ H @ sp.diags(1.0 / s)
    if n <= SPARSE_THRESHOLD:
        H = H.toarray()
        Hs = Hs.toarray()
    else:
        Hs = sp.csr_matrix(Hs)
    return WeightedOperator(g.vertices, measure, alpha, edges, H, Hs)


def assemble(g: MetricGraph) -> WeightedOperator:
    """h_alpha with the length measure m(v) = sum of incident lengths."""
    require_valid(g)
    return _build(g, _weights(g).m)


def degree_weighted_variant(g: MetricGraph) -> WeightedOperator:
    """Same difference expression with the combinatorial degree as measure.

    Only meant for contrast: on graphs with short edges its spectrum does not
    follow the quantum graph.
    """
    require_valid(g)
    return _build(g, _weights(g).deg.astype(float))


def quadratic_form(op: WeightedOperator, f) -> float:
    """Evaluate sum over edges b |f(u) - f(v)|^2 + sum_v alpha(v) |f(v)|^2."""
    f = np.asarray(f)
    if f.shape != (op.n,):
        raise ValueError(f"vector of length {op.n} expected, got shape {f.shape}")
    terms = [b * abs(f[i] - f[j]) ** 2 for i, j, b in op.edges]
    terms += [a * abs(x) ** 2 for a, x in zip(op.alpha, f)]
    return math.fsum(float(t) for t in terms)


@dataclass(frozen=True)
class DiscreteSpectrum:
    eigenvalues: np.ndarray
    tol_zero: float
    kappa_minus: int
    near_degenerate: bool


def jacobi_eigvalsh(A: np.ndarray, tol: float = 1e-15, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    scale = np.linalg.norm(A)
    if n == 1 or scale == 0:
        return np.sort(np.diag(A))
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, np.sum(A**2) - np.sum(np.diag(A) ** 2)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                Ap, Aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * Ap - s * Aq
                A[:, q] = s * Ap + c * Aq
                Rp, Rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * Rp - s * Rq
                A[q, :] = s * Rp + c * Rq
    return np.sort(np.diag(A))


def eigen(op: WeightedOperator, method: str = "lapack") -> DiscreteSpectrum:
    """Ascending eigenvalues of the symmetrized matrix and the negative count.

    ``method="jacobi"`` uses the in-repo rotation solver (small bases only).
    """
    if op.n > MAX_DENSE:
        raise ValueError(f"basis of {op.n} exceeds the dense cap {MAX_DENSE}")
    S = op.dense_symmetrized()
    if not np.all(np.isfinite(S)):
        raise ValueError("operator has non-finite entries")
    S = 0.5 * (S + S.T)
    if method == "jacobi":
        w = jacobi_eigvalsh(S)
    else:
        w = np.linalg.eigvalsh(S)
    norm = float(np.max(np.abs(w))) if w.size else 0.0
    tol = ZERO_RTOL * norm
    return DiscreteSpectrum(
        eigenvalues=w,
        tol_zero=tol,
        kappa_minus=int(np.sum(w < -tol)),
        near_degenerate=bool(np.any(np.abs(w) < 10 * tol)),
    )


def kappa_minus(op: WeightedOperator) -> int:
    return eigen(op).kappa_minus


@dataclass(frozen=True)
class JacobiData:
    """Diagonal a_k, off-diagonal b_k (k >= 1) and the operator of the line."""

    a: np.ndarray
    b: np.ndarray
    operator: WeightedOperator

    def matrix(self) -> np.ndarray:
        return self.operator.dense_symmetrized()


def path_graph_from_points(points, alphas=None) -> MetricGraph:
    x = np.asarray(points, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need at least two points")
    if x[0] != 0.0:
        raise ValueError("the first point must be 0")
    if np.any(np.diff(x) <= 0):
        raise ValueError("points must be strictly increasing")
    n = x.size
    al = np.zeros(n) if alphas is None else np.asarray(alphas, dtype=float)
    if al.shape != (n,):
        raise ValueError("one alpha per point expected")
    if al[0] != 0.0:
        raise ValueError("alpha at the origin must be 0")
    ids = [f"x{k:05d}" for k in range(n)]
    edges = [(f"e{k:05d}", ids[k - 1], ids[k], x[k] - x[k - 1]) for k in range(1, n)]
    return MetricGraph.build(edges, dict(zip(ids, al)))


def jacobi_from_points(points, alphas=None, measure: str = "length") -> JacobiData:
    """Tridiagonal form of h_alpha for point interactions at x_0 = 0 < x_1 < ...

    a_k = (alpha_k + 1/|e_k| + 1/|e_{k+1}|) / m(x_k) and
    b_k = |e_k|^-1 / sqrt(m(x_{k-1}) m(x_k)); with ``measure="degree"`` the
    combinatorial degree replaces m. The truncation's last point has a single
    edge, so a_k is reported for interior points only.
    """
    g = path_graph_from_points(points, alphas)
    op = assemble(g) if measure == "length" else degree_weighted_variant(g)
    x = np.asarray(points, dtype=float)
    ell = np.diff(x)
    mu = op.measure
    al = np.asarray(g.alpha)
    n = x.size
    a = np.array([(al[k] + 1 / ell[k - 1] + 1 / ell[k]) / mu[k] for k in range(1, n - 1)])
    b = np.array([(1 / ell[k - 1]) / math.sqrt(mu[k - 1] * mu[k]) for k in range(1, n)])
    return JacobiData(a, b, op)


def triplets_csv(op: WeightedOperator, symmetrized: bool = False) -> str:
    M = op.symmetrized if symmetrized else op.H
    M = sp.coo_matrix(M)
    buf = io.StringIO()
    buf.write("row_id,col_id,value\n")
    order = np.lexsort((M.col, M.row))
    for k in order:
        buf.write(f"{op.basis[M.row[k]]},{op.basis[M.col[k]]},{float(M.data[k])!r}\n")
    return buf.getvalue()


def vertex_table_csv(op: WeightedOperator) -> str:
    buf = io.StringIO()
    buf.write("vertex_id,m,alpha\n")
    for v, m, a in zip(op.basis, op.measure, op.alpha):
        buf.write(f"{v},{float(m)!r},{float(a)!r}\n")
    return buf.getvalue()

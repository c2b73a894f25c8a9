"""Spectra of the quantum-graph Hamiltonian with delta couplings.

The secular matrix S(lambda) regroups the per-edge Weyl matrices by vertex.
With inward derivatives at both edge ends, an edge function solving
-f'' = k^2 f with end values f(u), f(v) has inward derivatives

    f'_in(u) = -k cot(k l) f(u) + k csc(k l) f(v)

so the coupling condition sum f'_in(v) = alpha(v) f(v) becomes S(k^2) f = 0
with S_vv = alpha(v) + sum k cot(k l), S_uv = -k csc(k l). For lambda < 0
replace k by i kappa, giving coth/csch; at lambda = 0 both reduce to 1/l.

Eigenvalues are found from the counting function

    N(lambda) = #{eigenvalues < lambda} = N_D(lambda) + n_-(S(lambda)),

where N_D counts the decoupled Dirichlet eigenvalues (pi n / l)^2 below lambda.
Since S is decreasing between poles, N jumps exactly at eigenvalues, including
ones that sit on a Dirichlet pole and are invisible to det S.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .graph import MetricGraph, require_valid
from .laplacian import ZERO_RTOL, assemble, eigen

POLE_GUARD = 1e-6
BISECT_RTOL = 1e-10
BISECT_ATOL = 1e-13
FEM_DOF_CAP = 20000
DENSE_INERTIA_CAP = 8000
LDL_FROM = 1500


class PoleProximity(ValueError):
    def __init__(self, lam: float, edge_id: str):
        self.lam, self.edge_id = lam, edge_id
        super().__init__(f"lambda={lam!r} is within the pole guard of edge {edge_id}")


def _edge_terms(lam: float, length: float) -> tuple[float, float]:
    """Diagonal and off-diagonal contribution of one edge to S(lam)."""
    if lam == 0.0:
        return 1.0 / length, -1.0 / length
    if lam < 0:
        kap = math.sqrt(-lam)
        x = kap * length
        if x > 700:
            return kap, 0.0
        return kap / math.tanh(x), -kap / math.sinh(x)
    k = math.sqrt(lam)
    x = k * length
    return k / math.tan(x), -k / math.sin(x)


def _near_pole(g: MetricGraph, lam: float, guard: float):
    if lam <= 0:
        return None
    k = math.sqrt(lam)
    for e in g.edges:
        p = math.pi / e.length
        n = round(k / p)
        if n >= 1 and abs(k - n * p) < guard:
            return e.id
    return None


def secular_matrix(g: MetricGraph, lam: float, pole_guard: float = POLE_GUARD) -> np.ndarray:
    require_valid(g)
    return _secular(g, float(lam), pole_guard)


def _secular(g: MetricGraph, lam: float, pole_guard: float | None = POLE_GUARD) -> np.ndarray:
    if pole_guard is not None:
        bad = _near_pole(g, lam, pole_guard)
        if bad is not None:
            raise PoleProximity(lam, bad)
    ix = g.index
    S = np.diag(np.asarray(g.alpha, dtype=float))
    for e in g.edges:
        i, j = ix[e.tail], ix[e.head]
        d, o = _edge_terms(lam, e.length)
        S[i, i] += d
        S[j, j] += d
        S[i, j] += o
        S[j, i] += o
    return S


def pole_cleared_det(g: MetricGraph, k: float) -> float:
    """det S(k^2) * prod_e sin(k |e|), an entire function of k."""
    S = _secular(g, k * k, None)
    return float(np.linalg.det(S)) * math.prod(math.sin(k * e.length) for e in g.edges)


def dirichlet_count(g: MetricGraph, lam: float) -> int:
    """Number of decoupled Dirichlet eigenvalues strictly below lam."""
    if lam <= 0:
        return 0
    k = math.sqrt(lam)
    total = 0
    for e in g.edges:
        n = math.ceil(k * e.length / math.pi) - 1
        total += max(n, 0)
    return total


def counting_function(g: MetricGraph, lam: float) -> int:
    """N(lam), valid away from Dirichlet poles."""
    w = np.linalg.eigvalsh(_secular(g, lam, None))
    return dirichlet_count(g, lam) + int(np.sum(w < 0))


def secular_negative_count(g: MetricGraph) -> int:
    """kappa_- as n_-(S(0)), with an exact kernel (e.g. alpha = 0) not counted."""
    w = np.linalg.eigvalsh(_secular(g, 0.0))
    return int(np.sum(w < -ZERO_RTOL * np.max(np.abs(w))))


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    brackets: list[tuple[float, float]]
    kappa_minus: int
    method: str
    flags: set[str] = field(default_factory=set)
    near_pole: list[bool] = field(default_factory=list)

    def to_rows(self) -> list[dict]:
        rows = []
        for i, lam in enumerate(self.eigenvalues):
            lo, hi = self.brackets[i] if self.brackets else (lam, lam)
            fl = set(self.flags)
            if self.near_pole and self.near_pole[i]:
                fl.add("near-pole")
            rows.append(
                dict(index=i, lam=float(lam), method=self.method,
                     bracket_lo=float(lo), bracket_hi=float(hi), flags="|".join(sorted(fl)))
            )
        return rows


def _lower_start(g: MetricGraph) -> float:
    kap = 1.0
    while counting_function(g, -kap * kap) > 0:
        kap *= 2.0
        if kap > 1e12:
            raise RuntimeError("could not bound the spectrum from below")
    return -kap * kap


def commensurate(g: MetricGraph, max_den: int = 12, tol: float = 1e-12) -> bool:
    """True when two edge lengths have a rational ratio with a small denominator."""
    from fractions import Fraction

    ls = sorted({e.length for e in g.edges})
    if len(g.edges) > len(ls):
        return True
    for i, a in enumerate(ls):
        for b in ls[i + 1:]:
            r = Fraction(b / a).limit_denominator(max_den)
            if abs(b / a - float(r)) <= tol * (b / a):
                return True
    return False


def eigenvalues_below(
    g: MetricGraph,
    Lam: float,
    pole_guard: float = POLE_GUARD,
    rtol: float = BISECT_RTOL,
    cross_check: bool = True,
    fem_h: float | None = None,
) -> SpectrumResult:
    """All eigenvalues of H_alpha strictly below ``Lam`` with multiplicity."""
    require_valid(g)
    if not math.isfinite(Lam):
        raise ValueError("Lam must be finite")
    lo = _lower_start(g)
    # pole windows in lambda, merged
    windows = []
    if Lam > 0:
        kmax = math.sqrt(Lam)
        for e in g.edges:
            p = math.pi / e.length
            n = 1
            while n * p - pole_guard < kmax:
                c = n * p
                windows.append([max(c - pole_guard, 0.0) ** 2, (c + pole_guard) ** 2, c * c])
                n += 1
    windows.sort()
    merged = []
    for w in windows:
        if merged and w[0] <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], w[1])
            merged[-1][2].append(w[2])
        else:
            merged.append([w[0], w[1], [w[2]]])

    eigs, brackets, pole_flags = [], [], []

    def bisect(a, Na, b, Nb):
        # N(a) = Na < Nb = N(b); no pole inside (a, b)
        stack = [(a, Na, b, Nb)]
        while stack:
            a, Na, b, Nb = stack.pop()
            if Nb == Na:
                continue
            if b - a <= max(rtol * max(abs(a), abs(b)), BISECT_ATOL):
                eigs.extend([0.5 * (a + b)] * (Nb - Na))
                brackets.extend([(a, b)] * (Nb - Na))
                pole_flags.extend([False] * (Nb - Na))
                continue
            c = 0.5 * (a + b)
            Nc = counting_function(g, c)
            stack.append((c, Nc, b, Nb))
            stack.append((a, Na, c, Nc))

    a, Na = lo, 0
    for wlo, whi, centres in merged:
        if wlo >= Lam:
            break
        Nw = counting_function(g, wlo)
        bisect(a, Na, wlo, Nw)
        if whi >= Lam:
            a, Na = wlo, Nw
            break
        Nh = counting_function(g, whi)
        if Nh > Nw:
            c = float(np.median(centres))
            eigs.extend([c] * (Nh - Nw))
            brackets.extend([(wlo, whi)] * (Nh - Nw))
            pole_flags.extend([True] * (Nh - Nw))
        a, Na = whi, Nh
    if a < Lam:
        NL = counting_function(g, Lam) if _near_pole(g, Lam, pole_guard) is None else None
        if NL is None:
            # Lam itself sits in a pole window: stop just before it
            b = (math.sqrt(Lam) - pole_guard) ** 2
            bisect(a, Na, b, counting_function(g, b))
        else:
            bisect(a, Na, Lam, NL)

    order = np.argsort(eigs, kind="stable")
    ev = np.asarray(eigs, dtype=float)[order]
    res = SpectrumResult(
        eigenvalues=ev,
        brackets=[brackets[i] for i in order],
        kappa_minus=secular_negative_count(g),
        method="secular",
        near_pole=[pole_flags[i] for i in order],
    )
    if any(res.near_pole):
        res.flags.add("near-pole")
    if commensurate(g):
        res.flags.add("commensurate")
    if cross_check:
        h = fem_h or _default_h(g)
        fem = fem_eigen(fem_discretize(g, h / 2))
        if int(np.sum(fem.eigenvalues < Lam)) > len(ev):
            res.flags.add("count-mismatch")
    return res


# ---------------------------------------------------------------- FEM


@dataclass(frozen=True, eq=False)
class FemDiscretization:
    """P1 elements on every edge; vertex dofs come first in basis order."""

    graph: MetricGraph
    h: float
    K: sp.csr_matrix
    M: sp.csr_matrix
    cells: tuple[int, ...]

    @property
    def dof(self) -> int:
        return self.K.shape[0]


def _default_h(g: MetricGraph) -> float:
    return min(0.25, min(e.length for e in g.edges) / 2)


def fem_discretize(g: MetricGraph, h: float, min_cells: int = 1) -> FemDiscretization:
    require_valid(g)
    if not h > 0:
        raise ValueError("h must be positive")
    ix = g.index
    cells = tuple(max(min_cells, math.ceil(e.length / h - 1e-9)) for e in g.edges)
    dof = g.n + sum(c - 1 for c in cells)
    if dof > FEM_DOF_CAP:
        raise ValueError(f"{dof} degrees of freedom exceed the cap {FEM_DOF_CAP}")
    rows, cols, kv, mv = [], [], [], []
    nxt = g.n
    for e, c in zip(g.edges, cells):
        he = e.length / c
        nodes = [ix[e.tail]] + list(range(nxt, nxt + c - 1)) + [ix[e.head]]
        nxt += c - 1
        for a, b in zip(nodes[:-1], nodes[1:]):
            rows += [a, a, b, b]
            cols += [a, b, a, b]
            kv += [1 / he, -1 / he, -1 / he, 1 / he]
            mv += [he / 3, he / 6, he / 6, he / 3]
    rows += list(range(g.n))
    cols += list(range(g.n))
    kv += list(g.alpha)
    mv += [0.0] * g.n
    K = sp.csr_matrix((kv, (rows, cols)), shape=(dof, dof))
    M = sp.csr_matrix((mv, (rows, cols)), shape=(dof, dof))
    return FemDiscretization(g, h, K, M, cells)


def fem_eigen(disc: FemDiscretization, count: int | None = None, vectors: bool = False):
    """Lowest ``count`` generalized eigenvalues of (K, M), dense solve."""
    n = disc.dof
    if count is not None and not 1 <= count <= n:
        raise ValueError("count must be between 1 and the dof number")
    K, M = disc.K.toarray(), disc.M.toarray()
    sel = None if count is None else (0, count - 1)
    w, V = sla.eigh(K, M, subset_by_index=sel)
    res = SpectrumResult(w, [], int(np.sum(w < 0)), "fem")
    return (res, V) if vectors else res


def _negative_inertia(A: np.ndarray) -> tuple[int, float]:
    """Negative inertia and smallest |eigenvalue| / norm (estimated above
    ``LDL_FROM`` via the Bunch-Kaufman block diagonal)."""
    if A.shape[0] <= LDL_FROM:
        w = np.linalg.eigvalsh(A)
    else:
        _, D, _ = sla.ldl(A)
        w = []
        i, n = 0, D.shape[0]
        while i < n:
            if i + 1 < n and D[i + 1, i] != 0.0:
                w.extend(np.linalg.eigvalsh(D[i:i + 2, i:i + 2]))
                i += 2
            else:
                w.append(D[i, i])
                i += 1
        w = np.asarray(w)
    scale = max(float(np.max(np.abs(w))), 1e-300)
    # an exact kernel (alpha = 0) must not be counted from rounding noise
    return int(np.sum(w < -ZERO_RTOL * scale)), float(np.min(np.abs(w)) / scale)


def fem_negative_count(disc: FemDiscretization) -> tuple[int, float]:
    """Negative inertia of K, which equals that of the pencil (K, M).

    The second value is a relative smallness indicator of the eigenvalue
    closest to zero; tiny values mean the count is rounding-sensitive.
    """
    if disc.dof > DENSE_INERTIA_CAP:
        raise ValueError("too many degrees of freedom for a dense inertia count")
    return _negative_inertia(disc.K.toarray())


def richardson(coarse: float, fine: float, order: float = 2.0) -> float:
    r = 2.0**order
    return (r * fine - coarse) / (r - 1)


@dataclass
class QuantumCount:
    value: int
    route_a: int
    route_b: tuple[int, int]
    h: float
    flags: set[str] = field(default_factory=set)


def kappa_minus_quantum(g: MetricGraph, h: float | None = None, min_cells: int = 1) -> QuantumCount:
    """Negative count by FEM at h and h/2; the secular count n_-(S(0)) is recorded."""
    require_valid(g)
    h = h or _default_h(g)
    route_a = secular_negative_count(g)
    c1, r1 = fem_negative_count(fem_discretize(g, h, min_cells))
    c2, r2 = fem_negative_count(fem_discretize(g, h / 2, min_cells))
    flags = set()
    if c1 != c2:
        flags.add("mesh-disagreement")
    if c2 != route_a:
        flags.add("route-disagreement")
    if min(r1, r2) < 1e-10:
        flags.add("near-degenerate")
    return QuantumCount(c2, route_a, (c1, c2), h, flags)


def fem_lambda_min(g: MetricGraph, h: float | None = None, min_cells: int = 1) -> float:
    """Richardson-extrapolated lowest eigenvalue from meshes h and h/2."""
    h = h or _default_h(g)
    a = fem_eigen(fem_discretize(g, h, min_cells), count=1).eigenvalues[0]
    b = fem_eigen(fem_discretize(g, h / 2, min_cells), count=1).eigenvalues[0]
    return float(richardson(a, b))


def _sign_class(lam_min: float, kappa: int, tol: float) -> str:
    if kappa > 0:
        return "indefinite"
    return "positive" if lam_min > tol else "nonnegative"


def correspondence_report(g: MetricGraph, h: float | None = None, min_cells: int = 1) -> dict:
    """Compare negative counts and positivity of H_alpha and h_alpha."""
    ds = eigen(assemble(g))
    q = kappa_minus_quantum(g, h, min_cells)
    lq = fem_lambda_min(g, q.h, min_cells)
    ld = float(ds.eigenvalues[0])
    qtol = 1e-8 * max(1.0, abs(lq))
    flags = set(q.flags)
    if ds.near_degenerate:
        flags.add("near-degenerate")
    pq = _sign_class(lq, q.value, qtol)
    pd = _sign_class(ld, ds.kappa_minus, 10 * ds.tol_zero)
    return dict(
        kappa_minus_quantum=q.value,
        kappa_minus_discrete=ds.kappa_minus,
        kappa_minus_secular=q.route_a,
        lambda_min_quantum=lq,
        lambda_min_discrete=ld,
        positivity_quantum=pq,
        positivity_discrete=pd,
        agree=bool(q.value == ds.kappa_minus and pq == pd),
        flags=sorted(flags),
        tolerances=dict(tol_zero=ds.tol_zero, fem_h=q.h, quantum_zero=qtol),
    )

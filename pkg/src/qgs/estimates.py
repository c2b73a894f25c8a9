"""Isoperimetric constants, volume growth, heat-kernel decay and CLR sweeps."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .families import GraphFamily, prefix
from .graph import MetricGraph, UnknownVertexError, require_valid, _weights
from .laplacian import assemble, eigen
from .metrics import distance_ball, path_metric
from .quantum import kappa_minus_quantum

EXACT_LIMIT = 22


@dataclass(frozen=True)
class IsoperimetricResult:
    domain: tuple[str, ...]
    constant: float
    argmin: frozenset
    method: str
    modified: bool = False


def _boundary_data(g: MetricGraph, X) -> tuple[int, float, float]:
    X = set(X)
    w = _weights(g)
    ix = g.index
    nb = sum(1 for e in g.edges if (e.tail in X) != (e.head in X))
    mX = math.fsum(w.m[ix[v]] for v in X)
    aX = math.fsum(g.alpha_of(v) for v in X)
    return nb, mX, aX


def subset_ratio(g: MetricGraph, X, modified: bool = False) -> float:
    """#boundary edges (plus the alpha mass of X when modified) over m(X)."""
    nb, mX, aX = _boundary_data(g, X)
    return (nb + (aX if modified else 0.0)) / mX


def _check_domain(g, domain):
    dom = tuple(sorted(set(domain)))
    if not dom:
        raise ValueError("the domain must be nonempty")
    for v in dom:
        if v not in g.index:
            raise UnknownVertexError(v)
    return dom


def isoperimetric(
    g: MetricGraph, domain, modified: bool = False, method: str = "exact"
) -> IsoperimetricResult:
    """Infimum of the boundary-to-volume ratio over nonempty X inside ``domain``.

    Boundary edges are counted in the host graph, so edges leaving the domain
    count. X equal to the whole domain is admitted. ``modified`` adds
    sum_{v in X} alpha(v) to the numerator.
    """
    require_valid(g)
    dom = _check_domain(g, domain)
    if method == "exact":
        return _exact(g, dom, modified)
    if method == "greedy":
        return _greedy(g, dom, modified)
    raise ValueError(f"unknown method {method!r}")


def _exact(g, dom, modified):
    n = len(dom)
    if n > EXACT_LIMIT:
        raise ValueError(f"exact enumeration is limited to {EXACT_LIMIT} vertices, got {n}")
    w = _weights(g)
    ix = g.index
    pos = {v: i for i, v in enumerate(dom)}
    deg = [int(w.deg[ix[v]]) for v in dom]
    mass = [float(w.m[ix[v]]) for v in dom]
    al = [g.alpha_of(v) if modified else 0.0 for v in dom]
    nbrs = [[pos[u] for u in g.neighbors(v) if u in pos] for v in dom]
    inside = [False] * n
    nb, mX, aX = 0, 0.0, 0.0
    best, best_code = math.inf, 0
    code = 0
    # Gray code: step t flips the lowest set bit of t
    for t in range(1, 1 << n):
        i = (t & -t).bit_length() - 1
        k = sum(inside[j] for j in nbrs[i])
        if inside[i]:
            inside[i] = False
            nb -= deg[i] - 2 * k
            mX -= mass[i]
            aX -= al[i]
        else:
            inside[i] = True
            nb += deg[i] - 2 * k
            mX += mass[i]
            aX += al[i]
        code ^= 1 << i
        r = (nb + aX) / mX if mX > 0 else math.inf
        if r < best:
            best, best_code = r, code
    X = frozenset(dom[i] for i in range(n) if best_code >> i & 1)
    # recompute from scratch so the reported value is exactly that of argmin
    return IsoperimetricResult(dom, subset_ratio(g, X, modified), X, "exact", modified)


def dirichlet_restriction(g: MetricGraph, domain, with_alpha: bool = False) -> np.ndarray:
    """Rows and columns of the symmetrized operator indexed by ``domain``.

    Couplings to vertices outside stay in the diagonal.
    """
    gg = g if with_alpha else g.with_alpha([0.0] * g.n)
    S = assemble(gg).dense_symmetrized()
    idx = [g.index[v] for v in domain]
    return S[np.ix_(idx, idx)]


def _greedy(g, dom, modified):
    A = dirichlet_restriction(g, dom, with_alpha=modified)
    _, V = np.linalg.eigh(0.5 * (A + A.T))
    w = _weights(g)
    phi = np.abs(V[:, 0]) / np.sqrt([w.m[g.index[v]] for v in dom])
    order = [dom[i] for i in np.argsort(-phi, kind="stable")]
    best, arg = math.inf, None
    for j in range(1, len(order) + 1):
        X = frozenset(order[:j])
        r = subset_ratio(g, X, modified)
        if r < best:
            best, arg = r, X
    return IsoperimetricResult(dom, best, arg, "greedy", modified)


@dataclass(frozen=True)
class CheegerCheck:
    lambda_min_dirichlet: float
    constant: float
    half_C_squared: float
    holds: bool
    argmin: frozenset


def cheeger_bound_check(g: MetricGraph, domain) -> CheegerCheck:
    """Compare the lowest Dirichlet eigenvalue of h_0 on ``domain`` with C^2/2."""
    require_valid(g)
    dom = _check_domain(g, domain)
    if len(dom) >= g.n:
        raise ValueError("the domain must be a proper subset of the vertices")
    lam = float(np.linalg.eigvalsh(dirichlet_restriction(g, dom))[0])
    iso = isoperimetric(g, dom)
    half = 0.5 * iso.constant**2
    return CheegerCheck(lam, iso.constant, half, lam >= half, iso.argmin)


@dataclass(frozen=True)
class VolumeGrowth:
    radii: np.ndarray
    volumes: np.ndarray
    mu_estimate: np.ndarray
    mu_lower_estimate: np.ndarray
    local_slope: np.ndarray
    root: str


def volume_growth(f: GraphFamily, depth: int, radii=None, root: str | None = None) -> VolumeGrowth:
    """Finite-radius slopes (1/r) log m(B_r) with natural-metric balls.

    These are estimates on a prefix; the defining liminf is out of reach.
    ``mu_lower_estimate`` takes the infimum over interior vertices of
    (1/r) log(m(B_r(v)) / m(B_1(v))).
    """
    p = prefix(f, depth)
    g = p.graph
    root = root or p.root
    if radii is None:
        radii = np.arange(1, depth + 1, dtype=float)
    radii = np.asarray(radii, dtype=float)
    rho = path_metric(g, "natural")
    m = _weights(g).m
    D = rho.matrix()
    ix = g.index
    interior = [ix[v] for v in p.interior()] or list(range(g.n))

    def vol(i, r):
        return float(np.sum(m[D[i] <= r * (1 + 1e-12)]))

    vols = np.array([vol(ix[root], r) for r in radii])
    mu = np.log(vols) / radii
    lower = np.array(
        [min(math.log(vol(i, r) / vol(i, 1.0)) for i in interior) / r for r in radii]
    )
    slope = np.diff(np.log(vols), prepend=np.nan) / np.diff(radii, prepend=np.nan)
    return VolumeGrowth(radii, vols, mu, lower, slope, root)


@dataclass
class DecayFit:
    t: np.ndarray
    g: np.ndarray
    exponent: float
    window: tuple[float, float]
    saturation: float
    residual: float
    fitted: np.ndarray = field(repr=False, default=None)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,g,fitted_flag\n")
        for t, v, f in zip(self.t, self.g, self.fitted):
            buf.write(f"{float(t)!r},{float(v)!r},{int(f)}\n")
        return buf.getvalue()


def heat_kernel(g: MetricGraph, t: float) -> np.ndarray:
    """P(t; u, v) of exp(-t h_0) with respect to m."""
    return _kernel_factory(g)(t)


def _kernel_factory(g: MetricGraph):
    op = assemble(g.with_alpha([0.0] * g.n))
    lam, psi = np.linalg.eigh(op.dense_symmetrized())
    lam = np.maximum(lam, 0.0)
    phi = psi / np.sqrt(op.measure)[:, None]

    def P(t):
        return (phi * np.exp(-t * lam)) @ phi.T

    return P


def heat_decay(g: MetricGraph, t_grid, window=None, saturation_factor: float = 10.0) -> DecayFit:
    """g(t) = max |P(t;u,v)| on ``t_grid`` and a log-log power fit.

    Points with g below ``saturation_factor`` times the stationary value
    1/m(V) are left out of the fit.
    """
    require_valid(g)
    t = np.asarray(t_grid, dtype=float)
    P = _kernel_factory(g)
    vals = np.array([float(np.max(np.abs(P(s)))) for s in t])
    sat = 1.0 / float(np.sum(_weights(g).m))
    lo, hi = window if window is not None else (t.min(), t.max())
    mask = (t >= lo) & (t <= hi) & (t > 0) & (vals > saturation_factor * sat)
    if mask.sum() < 2:
        raise ValueError("the fit window holds fewer than two usable points")
    x, y = np.log(t[mask]), np.log(vals[mask])
    coef, res, *_ = np.polyfit(x, y, 1, full=True)
    resid = float(math.sqrt(res[0] / mask.sum())) if len(res) else 0.0
    return DecayFit(t, vals, float(coef[0]), (float(lo), float(hi)), sat, resid, mask)


def weak_lq_norm(values, q: float) -> float:
    """sup_n n^(1/q) a_n over the decreasing rearrangement of |values|."""
    if q <= 0:
        raise ValueError("q must be positive")
    a = np.sort(np.abs(np.asarray(values, dtype=float)))[::-1]
    if a.size == 0:
        return 0.0
    n = np.arange(1, a.size + 1)
    return float(np.max(n ** (1.0 / q) * a))


@dataclass(frozen=True)
class ClrRow:
    lam: float
    kappa_discrete: int
    kappa_quantum: int
    rhs_D: float
    weak_norm_q: float
    flags: tuple[str, ...] = ()


def clr_sweep(
    g: MetricGraph,
    alpha,
    D: float,
    lambdas,
    q: float | None = None,
    h: float | None = None,
    min_cells: int = 1,
) -> list[ClrRow]:
    """Negative counts of h_{-lam alpha} and H_{-lam alpha} with the CLR sum.

    ``alpha`` is a mapping or basis-aligned array of nonnegative values.
    ``q`` defaults to D/4, inside the admissible range (0, D/2).
    """
    require_valid(g)
    if not D > 2:
        raise ValueError("D must exceed 2")
    if isinstance(alpha, dict):
        a = np.array([float(alpha.get(v, 0.0)) for v in g.vertices])
    else:
        a = np.asarray(alpha, dtype=float)
    if a.shape != (g.n,):
        raise ValueError("alpha must give one value per vertex")
    if np.any(a < 0):
        raise ValueError("alpha must be nonnegative")
    q = D / 4 if q is None else q
    m = _weights(g).m
    wq = weak_lq_norm(a, q)
    rows = []
    for lam in lambdas:
        gl = g.with_alpha(-lam * a)
        ds = eigen(assemble(gl))
        qc = kappa_minus_quantum(gl, h, min_cells)
        rhs = math.fsum(((lam * a / m) ** (D / 2) * m).tolist())
        fl = set(qc.flags)
        if ds.near_degenerate:
            fl.add("near-degenerate")
        rows.append(ClrRow(float(lam), ds.kappa_minus, qc.value, rhs, lam * wq, tuple(sorted(fl))))
    return rows


def clr_csv(rows: list[ClrRow]) -> str:
    buf = io.StringIO()
    buf.write("lambda,kappa_discrete,kappa_quantum,rhs_D,weak_norm_q\n")
    for r in rows:
        buf.write(f"{float(r.lam)!r},{r.kappa_discrete},{r.kappa_quantum},{float(r.rhs_D)!r},{float(r.weak_norm_q)!r}\n")
    return buf.getvalue()


def isoperimetric_at_infinity(f: GraphFamily, depth: int, radii, root: str | None = None):
    """Estimate series C(V_depth minus B_r) for increasing r (greedy above the exact limit)."""
    p = prefix(f, depth)
    g = p.graph
    rho = path_metric(g, "natural")
    root = root or p.root
    out = []
    for r in radii:
        ball = distance_ball(g, rho, root, r)
        rest = [v for v in g.vertices if v not in ball]
        if not rest:
            break
        meth = "exact" if len(rest) <= EXACT_LIMIT else "greedy"
        out.append((float(r), isoperimetric(g, rest, method=meth).constant, meth))
    return out

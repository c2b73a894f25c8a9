"""Path pseudo metrics generated by positive edge weights."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .graph import Edge, MetricGraph, UnknownVertexError, Weights, require_valid, _weights

RULES = ("natural", "m_sum", "sqrt", "intrinsic_default")

EdgeRule = Callable[[Edge, Weights, dict], float]


def _natural(e, w, ix):
    return e.length


def _m_sum(e, w, ix):
    return w.m[ix[e.tail]] + w.m[ix[e.head]]


def _sqrt(e, w, ix):
    return math.sqrt(e.length)


def _intrinsic_default(e, w, ix):
    return max(w.Deg[ix[e.tail]], w.Deg[ix[e.head]]) ** -0.5


_RULE_FUNCS = {
    "natural": _natural,
    "m_sum": _m_sum,
    "sqrt": _sqrt,
    "intrinsic_default": _intrinsic_default,
}


@dataclass(eq=False)
class PathMetric:
    """Shortest-path distances for the edge weights ``p``.

    Rows are computed on demand per source and cached.
    """

    graph: MetricGraph
    rule: str
    p: dict[str, float]
    _rows: dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def _adj(self) -> csr_matrix:
        if not hasattr(self, "_adj_cache"):
            ix = self.graph.index
            r, c, d = [], [], []
            for e in self.graph.edges:
                i, j = ix[e.tail], ix[e.head]
                r += [i, j]
                c += [j, i]
                d += [self.p[e.id]] * 2
            self._adj_cache = csr_matrix((d, (r, c)), shape=(self.graph.n,) * 2)
        return self._adj_cache

    def row(self, v: str) -> np.ndarray:
        if v not in self.graph.index:
            raise UnknownVertexError(v)
        i = self.graph.index[v]
        if i not in self._rows:
            self._rows[i] = dijkstra(self._adj, directed=False, indices=i)
        return self._rows[i]

    def __call__(self, u: str, v: str) -> float:
        return float(self.row(u)[self.graph.index[v]])

    def matrix(self) -> np.ndarray:
        return np.vstack([self.row(v) for v in self.graph.vertices])

    def to_csv(self) -> str:
        D = self.matrix()
        buf = io.StringIO()
        buf.write("source_id,target_id,distance\n")
        for i, u in enumerate(self.graph.vertices):
            for j, v in enumerate(self.graph.vertices):
                buf.write(f"{u},{v},{float(D[i, j])!r}\n")
        return buf.getvalue()


_CACHE: dict[tuple[int, str], PathMetric] = {}


def path_metric(g: MetricGraph, rule: str | EdgeRule | dict = "natural") -> PathMetric:
    """Path metric for a named rule, a callable ``(edge, weights, index) -> p``
    or an explicit ``{edge_id: p}`` mapping. Named rules are cached per graph.
    """
    require_valid(g)
    key = None
    if isinstance(rule, str):
        if rule not in _RULE_FUNCS:
            raise ValueError(f"unknown rule {rule!r}; choose from {RULES}")
        key = (hash(g), rule)
        if key in _CACHE:
            return _CACHE[key]
        fn, name = _RULE_FUNCS[rule], rule
    elif isinstance(rule, dict):
        fn, name = (lambda e, w, ix: rule[e.id]), "custom"
    else:
        fn, name = rule, "custom"
    w = _weights(g)
    p = {e.id: float(fn(e, w, g.index)) for e in g.edges}
    bad = [k for k, x in p.items() if not (x > 0 and math.isfinite(x))]
    if bad:
        raise ValueError(f"edge weights must be positive and finite: {bad[:3]}")
    pm = PathMetric(g, name, p)
    if key is not None:
        _CACHE[key] = pm
    return pm


@dataclass(frozen=True)
class IntrinsicReport:
    slack: dict[str, float]
    worst_vertex: str
    worst_slack: float
    intrinsic: bool


def is_intrinsic(g: MetricGraph, metric: PathMetric, atol: float = 1e-12) -> IntrinsicReport:
    """Slack m(v) - sum_u b(u,v) rho(u,v)^2 at every vertex.

    A slack above ``-atol * m(v)`` counts as nonnegative.
    """
    w = _weights(g)
    ix = g.index
    acc = {v: [w.m[ix[v]]] for v in g.vertices}
    ok = True
    for e in g.edges:
        d = metric(e.tail, e.head)
        t = d * d / e.length
        acc[e.tail].append(-t)
        acc[e.head].append(-t)
    slack = {v: math.fsum(a) for v, a in acc.items()}
    worst = min(slack, key=slack.get)
    for v, s in slack.items():
        if s < -atol * w.m[ix[v]]:
            ok = False
    return IntrinsicReport(slack, worst, slack[worst], ok)


def distance_ball(g: MetricGraph, metric: PathMetric, v: str, r: float, rtol: float = 1e-12) -> set[str]:
    if r < 0:
        raise ValueError("radius must be nonnegative")
    d = metric.row(v)
    lim = r * (1 + rtol)
    return {u for u, x in zip(g.vertices, d) if x <= lim}

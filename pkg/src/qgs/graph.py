"""Metric graphs with vertex coupling strengths and their weight functions."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np


class InvalidGraphError(ValueError):
    """Raised when an operation needs a graph that passes :func:`validate`."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        msg = "; ".join(str(d) for d in self.diagnostics) or "invalid graph"
        super().__init__(msg)


class UnknownVertexError(KeyError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    length: float

    def other(self, v: str) -> str:
        return self.head if v == self.tail else self.tail


@dataclass(frozen=True)
class Diagnostic:
    code: str
    subject: str
    message: str = ""

    def __str__(self):
        return f"{self.code}({self.subject})" + (f": {self.message}" if self.message else "")


@dataclass(frozen=True)
class MetricGraph:
    """Finite metric graph G = (V, E, |.|) together with coupling strengths alpha.

    ``vertices`` is kept in lexicographic order; this order fixes the basis
    of every matrix assembled from the graph. ``alpha`` is aligned with it.
    Construction never raises on structural defects so that :func:`validate`
    can report them; use :meth:`build` for the convenient path.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    alpha: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if not self.alpha:
            object.__setattr__(self, "alpha", tuple(0.0 for _ in self.vertices))

    @classmethod
    def build(
        cls,
        edges: Iterable,
        alpha: Mapping[str, float] | None = None,
        vertices: Iterable[str] | None = None,
    ) -> "MetricGraph":
        """Build from ``(tail, head, length)`` or ``(id, tail, head, length)`` tuples.

        Vertex ids are converted to strings. Missing alpha values default to 0.
        """
        es = []
        for k, e in enumerate(edges):
            if isinstance(e, Edge):
                es.append(e)
            elif len(e) == 3:
                es.append(Edge(f"e{k}", str(e[0]), str(e[1]), float(e[2])))
            else:
                es.append(Edge(str(e[0]), str(e[1]), str(e[2]), float(e[3])))
        vs = set(str(v) for v in vertices) if vertices is not None else set()
        for e in es:
            vs.update((e.tail, e.head))
        if alpha:
            vs.update(str(v) for v in alpha)
        order = tuple(sorted(vs))
        alpha = {str(k): float(v) for k, v in (alpha or {}).items()}
        return cls(order, tuple(es), tuple(alpha.get(v, 0.0) for v in order))

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def incident(self) -> dict[str, tuple[Edge, ...]]:
        inc = defaultdict(list)
        for e in self.edges:
            inc[e.tail].append(e)
            if e.head != e.tail:
                inc[e.head].append(e)
        return {v: tuple(inc.get(v, ())) for v in self.vertices}

    @property
    def n(self) -> int:
        return len(self.vertices)

    def alpha_of(self, v: str) -> float:
        return self.alpha[self.index[v]]

    def alpha_map(self) -> dict[str, float]:
        return dict(zip(self.vertices, self.alpha))

    def neighbors(self, v: str) -> list[str]:
        return [e.other(v) for e in self.incident[v]]

    def with_alpha(self, alpha) -> "MetricGraph":
        """Copy with new couplings; ``alpha`` is a mapping or a basis-aligned array."""
        if isinstance(alpha, Mapping):
            vals = tuple(float(alpha.get(v, 0.0)) for v in self.vertices)
        else:
            vals = tuple(float(a) for a in alpha)
            if len(vals) != self.n:
                raise ValueError("alpha length does not match the vertex count")
        return MetricGraph(self.vertices, self.edges, vals)

    def total_length(self) -> float:
        return math.fsum(e.length for e in self.edges)

    def subgraph(self, keep: Iterable[str]) -> "MetricGraph":
        keep = set(keep)
        es = tuple(e for e in self.edges if e.tail in keep and e.head in keep)
        vs = tuple(v for v in self.vertices if v in keep)
        return MetricGraph(vs, es, tuple(self.alpha_of(v) for v in vs))

    def is_equilateral(self, rtol: float = 1e-12) -> bool:
        ls = [e.length for e in self.edges]
        return bool(ls) and max(ls) - min(ls) <= rtol * max(ls)


def validate(g: MetricGraph) -> list[Diagnostic]:
    """Return the list of violated graph invariants (empty when valid)."""
    out: list[Diagnostic] = []
    if not g.vertices:
        return [Diagnostic("EmptyGraph", "-", "no vertices")]
    if len(set(g.vertices)) != len(g.vertices):
        out.append(Diagnostic("DuplicateId", "vertices"))
    known = set(g.vertices)
    seen_ids = set()
    pairs = {}
    for e in g.edges:
        if e.id in seen_ids:
            out.append(Diagnostic("DuplicateId", e.id, "edge id used twice"))
        seen_ids.add(e.id)
        for end in (e.tail, e.head):
            if end not in known:
                out.append(Diagnostic("UnknownVertex", e.id, f"endpoint {end!r}"))
        if e.tail == e.head:
            out.append(Diagnostic("LoopAt", e.tail, f"edge {e.id}"))
        if not math.isfinite(e.length):
            out.append(Diagnostic("NonFiniteLength", e.id))
        elif e.length <= 0:
            out.append(Diagnostic("NonPositiveLength", e.id, f"length {e.length}"))
        key = frozenset((e.tail, e.head))
        if e.tail != e.head:
            if key in pairs:
                out.append(Diagnostic("MultiEdge", e.id, f"parallel to {pairs[key]}"))
            else:
                pairs[key] = e.id
    if len(g.alpha) != len(g.vertices):
        out.append(Diagnostic("AlphaNotTotal", "alpha"))
    else:
        for v, a in zip(g.vertices, g.alpha):
            if not math.isfinite(a):
                out.append(Diagnostic("NonFiniteAlpha", v))
    for v in g.vertices:
        if not g.incident[v]:
            out.append(Diagnostic("IsolatedVertex", v, "degree 0"))
    if len(_components(g)) > 1:
        out.append(Diagnostic("NotConnected", "graph", f"{len(_components(g))} components"))
    return out


def require_valid(g: MetricGraph) -> None:
    diags = validate(g)
    if diags:
        raise InvalidGraphError(diags)


def _components(g: MetricGraph) -> list[set[str]]:
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        if e.tail in parent and e.head in parent:
            a, b = find(e.tail), find(e.head)
            if a != b:
                parent[a] = b
    comps = defaultdict(set)
    for v in g.vertices:
        comps[find(v)].add(v)
    return list(comps.values())


@dataclass(frozen=True)
class Weights:
    """Vertex and edge weights of a metric graph, aligned with ``vertices``.

    m[i] is the sum of incident lengths, deg[i] the combinatorial degree and
    Deg[i] = (sum of inverse incident lengths) / m[i]. ``b`` maps unordered
    vertex pairs to the inverse length of the joining edge.
    """

    vertices: tuple[str, ...]
    m: np.ndarray
    deg: np.ndarray
    Deg: np.ndarray
    b: dict

    def b_of(self, u: str, v: str) -> float:
        return self.b.get(frozenset((u, v)), 0.0)

    def as_dict(self) -> dict:
        return {
            "m": dict(zip(self.vertices, self.m.tolist())),
            "deg": dict(zip(self.vertices, self.deg.tolist())),
            "Deg": dict(zip(self.vertices, self.Deg.tolist())),
        }


def weights(g: MetricGraph) -> Weights:
    require_valid(g)
    return _weights(g)


def _weights(g: MetricGraph) -> Weights:
    m = np.zeros(g.n)
    inv = np.zeros(g.n)
    deg = np.zeros(g.n, dtype=int)
    b = {}
    ix = g.index
    for e in g.edges:
        for v in (e.tail, e.head):
            i = ix[v]
            m[i] += e.length
            inv[i] += 1.0 / e.length
            deg[i] += 1
        b[frozenset((e.tail, e.head))] = 1.0 / e.length
    return Weights(g.vertices, m, deg, inv / m, b)


def combinatorial_neighborhood(g: MetricGraph, X: Iterable[str]) -> set[str]:
    X = set(X)
    unknown = X - set(g.vertices)
    if unknown:
        raise UnknownVertexError(sorted(unknown)[0])
    out = set(X)
    for v in X:
        out.update(g.neighbors(v))
    return out

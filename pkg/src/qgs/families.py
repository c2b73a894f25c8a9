"""Deterministic shell-by-shell generators for infinite graph families.

An infinite graph is only ever represented by a finite prefix (the first
``depth`` shells) plus symbolic descriptions of its scalar sequences. Each
sequence is a :class:`SeqRule`; its tail class is what the criteria engine
reasons about, and the prefix is generated from the very same rule so the
two always agree.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

from .graph import Edge, MetricGraph

TAIL_CLASSES = ("geometric", "harmonic", "power", "constant", "unknown")

MAX_DEPTH = 4096
MAX_VERTICES = 200_000


class DepthLimitError(ValueError):
    pass


@dataclass(frozen=True)
class Asymptotic:
    """Sequence asymptotically equal to ``scale * base**k * k**power``.

    ``scale == 0`` stands for an eventually vanishing sequence.
    """

    scale: float
    base: float = 1.0
    power: float = 0.0

    @property
    def is_zero(self) -> bool:
        return self.scale == 0

    def _growth(self) -> tuple[float, float]:
        return (self.base, self.power)

    def _decays(self) -> bool:
        return self.base < 1 or (self.base == 1 and self.power < 0)

    def _grows(self) -> bool:
        return self.base > 1 or (self.base == 1 and self.power > 0)

    def tends_to_zero(self) -> bool:
        return self.is_zero or self._decays()

    def bounded(self) -> bool:
        return self.is_zero or not self._grows()

    def unbounded(self) -> bool:
        return not self.bounded()

    def bounded_below(self) -> bool:
        return self.scale >= 0 or not self._grows()

    def tends_to_minus_infinity(self) -> bool:
        return self.scale < 0 and self._grows()

    def inf_positive(self) -> bool:
        """For a strictly positive sequence: is its infimum positive?"""
        return self.scale > 0 and not self._decays()

    def summable(self) -> bool:
        if self.is_zero or self.base < 1:
            return True
        if self.base > 1:
            return False
        return self.power < -1

    def __mul__(self, other: "Asymptotic") -> "Asymptotic":
        return Asymptotic(self.scale * other.scale, self.base * other.base, self.power + other.power)

    def __truediv__(self, other: "Asymptotic") -> "Asymptotic":
        if other.is_zero:
            raise ZeroDivisionError("division by an eventually vanishing sequence")
        return Asymptotic(self.scale / other.scale, self.base / other.base, self.power - other.power)

    def __pow__(self, s: float) -> "Asymptotic":
        return Asymptotic(abs(self.scale) ** s, self.base**s, self.power * s)

    def __abs__(self):
        return Asymptotic(abs(self.scale), self.base, self.power)

    def __add__(self, other: "Asymptotic") -> "Asymptotic | None":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self._growth() == other._growth():
            s = self.scale + other.scale
            # cancellation leaves an undetermined lower-order remainder
            return Asymptotic(s, self.base, self.power) if s != 0 else None
        return self if self._growth() > other._growth() else other

    def __neg__(self):
        return Asymptotic(-self.scale, self.base, self.power)

    def __sub__(self, other):
        return self + (-other)


@dataclass(frozen=True)
class SeqRule:
    """Scalar sequence ``offset + scale * shape(k)`` for k >= 1.

    ``shape`` is r**k (geometric, r = ``param``), 1/k (harmonic), k**p
    (power, p = ``param``) or 1 (constant). With ``support`` set, the value
    is 0 for k > support. ``values`` overrides the closed form with an
    explicit callable; the declared tail is then spot-checked by
    :meth:`check`, and ``tail="unknown"`` makes every symbolic decision
    inconclusive.
    """

    tail: str = "constant"
    scale: float = 1.0
    param: float = 0.0
    offset: float = 0.0
    support: int | None = None
    values: Callable[[int], float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.tail not in TAIL_CLASSES:
            raise ValueError(f"unknown tail class {self.tail!r}")
        if self.tail == "geometric" and self.param <= 0:
            raise ValueError("geometric ratio must be positive")

    def shape(self, k: int) -> float:
        if self.tail == "geometric":
            return self.param**k
        if self.tail == "harmonic":
            return 1.0 / k
        if self.tail == "power":
            return float(k) ** self.param
        return 1.0

    def __call__(self, k: int) -> float:
        if self.support is not None and k > self.support:
            return 0.0
        if self.values is not None:
            return float(self.values(k))
        return self.offset + self.scale * self.shape(k)

    def asymptotic(self) -> Asymptotic | None:
        if self.support is not None:
            return Asymptotic(0.0)
        if self.tail == "unknown":
            return None
        base, power = 1.0, 0.0
        if self.tail == "geometric":
            base = self.param
        elif self.tail == "harmonic":
            power = -1.0
        elif self.tail == "power":
            power = self.param
        main = Asymptotic(self.scale, base, power)
        if self.tail == "constant":
            return Asymptotic(self.scale + self.offset)
        return main + Asymptotic(self.offset)

    def check(self, upto: int, rtol: float = 1e-9) -> bool:
        """Spot-check that generated values follow the declared tail class."""
        if self.tail == "unknown" or self.support is not None:
            return True
        for k in range(1, upto + 1):
            expected = self.offset + self.scale * self.shape(k)
            got = self(k)
            if abs(got - expected) > rtol * max(1.0, abs(expected)):
                return False
        return True

    def describe(self) -> str:
        if self.support is not None:
            return f"finite_support({self.support})"
        if self.tail in ("geometric", "power"):
            return f"{self.tail}({self.param:g})"
        return self.tail


def constant(c: float = 1.0) -> SeqRule:
    return SeqRule("constant", scale=c)


def geometric(r: float, scale: float = 1.0) -> SeqRule:
    return SeqRule("geometric", scale=scale, param=r)


def harmonic(scale: float = 1.0) -> SeqRule:
    return SeqRule("harmonic", scale=scale)


def power(p: float, scale: float = 1.0, offset: float = 0.0) -> SeqRule:
    return SeqRule("power", scale=scale, param=p, offset=offset)


ZERO = SeqRule("constant", scale=0.0)


@dataclass(frozen=True)
class Prefix:
    """Generated prefix of a family: the graph plus shell index per vertex."""

    graph: MetricGraph
    shells: dict = field(compare=False)
    root: str
    depth: int

    def interior(self) -> list[str]:
        """Vertices whose whole neighbourhood in the infinite graph is present."""
        return [v for v in self.graph.vertices if self.shells[v] < self.depth]


@dataclass(frozen=True)
class GraphFamily:
    """Description of an infinite (or finite, for fixed-size boxes) graph family.

    kind:
      ``delta_line``  half-line with points x_k, |e_k| = lengths(k), alpha_k = alpha(k)
      ``ladder``      spine x_k with two unit (or ``vertical(k)``) legs per column,
                      horizontal lengths(k)
      ``rooted_tree`` vertex in shell k has degrees(k+1) children; with
                      ``tree_lengths="short_edge"`` one child edge has length
                      1/degrees(k+1) and the rest length 1, with ``"radial"``
                      every edge into shell k has length lengths(k)
      ``lattice_box`` grid of dimension ``dimension``; box [0, depth]^N unless
                      ``sides`` fixes a finite box; edge length lengths(1)
      ``custom``      ``generator(depth) -> Prefix``
    alpha(k) is applied to every vertex of shell k >= 1; shell 0 gets 0.
    """

    kind: str
    lengths: SeqRule = field(default_factory=constant)
    alpha: SeqRule = ZERO
    degrees: SeqRule | None = None
    vertical: SeqRule = field(default_factory=constant)
    tree_lengths: str = "short_edge"
    dimension: int = 2
    sides: tuple[int, ...] | None = None
    depth_limit: int = 64
    generator: Callable[[int], Prefix] | None = field(default=None, compare=False)
    custom_tails: tuple = ()
    name: str = ""

    def tail_classes(self) -> dict[str, str]:
        out = {"lengths": self.lengths.describe(), "alpha": self.alpha.describe()}
        if self.kind == "rooted_tree" and self.degrees is not None:
            out["degrees"] = self.degrees.describe()
        if self.kind == "ladder":
            out["vertical"] = self.vertical.describe()
        out.update(dict(self.custom_tails))
        return out

    def with_alpha(self, alpha: SeqRule) -> "GraphFamily":
        from dataclasses import replace

        return replace(self, alpha=alpha)

    @property
    def is_finite(self) -> bool:
        return self.kind == "lattice_box" and self.sides is not None


def generate(f: GraphFamily, depth: int) -> MetricGraph:
    return prefix(f, depth).graph


def prefix(f: GraphFamily, depth: int) -> Prefix:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if depth > min(f.depth_limit, MAX_DEPTH):
        raise DepthLimitError(f"depth {depth} exceeds the cap {min(f.depth_limit, MAX_DEPTH)}")
    builder = _BUILDERS.get(f.kind)
    if builder is None:
        raise ValueError(f"unknown family kind {f.kind!r}")
    return builder(f, depth)


def _shell_alpha(f: GraphFamily, shells: dict) -> dict:
    return {v: (f.alpha(k) if k >= 1 else 0.0) for v, k in shells.items()}


def _delta_line(f: GraphFamily, depth: int) -> Prefix:
    ids = [f"x{k:05d}" for k in range(depth + 1)]
    edges = [Edge(f"e{k:05d}", ids[k - 1], ids[k], f.lengths(k)) for k in range(1, depth + 1)]
    shells = {v: k for k, v in enumerate(ids)}
    g = MetricGraph.build(edges, _shell_alpha(f, shells))
    return Prefix(g, shells, ids[0], depth)


def _ladder(f: GraphFamily, depth: int) -> Prefix:
    # column c (shell) sits at x_{c+1}; spine edges carry lengths(c+1)
    def vid(c, n):
        return f"v{c:05d}{'mzp'[n + 1]}"

    edges, shells = [], {}
    for c in range(depth + 1):
        for n in (-1, 0, 1):
            shells[vid(c, n)] = c
        edges.append(Edge(f"u{c:05d}", vid(c, 0), vid(c, 1), f.vertical(c + 1)))
        edges.append(Edge(f"d{c:05d}", vid(c, 0), vid(c, -1), f.vertical(c + 1)))
        if c < depth:
            edges.append(Edge(f"h{c:05d}", vid(c, 0), vid(c + 1, 0), f.lengths(c + 1)))
    g = MetricGraph.build(edges, _shell_alpha(f, shells))
    return Prefix(g, shells, vid(0, 0), depth)


def _tree_children(f: GraphFamily, k: int) -> int:
    rule = f.degrees or power(1.0, offset=1.0)
    n = int(round(rule(k)))
    if n < 1:
        raise ValueError(f"degree rule gives {n} children in shell {k}")
    return n


def _rooted_tree(f: GraphFamily, depth: int) -> Prefix:
    root = "t"
    shells = {root: 0}
    edges = []
    frontier = [root]
    for k in range(1, depth + 1):
        n = _tree_children(f, k)
        if len(shells) + len(frontier) * n > MAX_VERTICES:
            raise DepthLimitError(f"tree prefix exceeds {MAX_VERTICES} vertices at depth {depth}")
        nxt = []
        for p in frontier:
            for j in range(n):
                c = f"{p}.{j:03d}"
                if f.tree_lengths == "radial":
                    ell = f.lengths(k)
                else:
                    ell = 1.0 / n if j == 0 else 1.0
                edges.append(Edge(f"E{c}", p, c, ell))
                shells[c] = k
                nxt.append(c)
        frontier = nxt
    g = MetricGraph.build(edges, _shell_alpha(f, shells))
    return Prefix(g, shells, root, depth)


def _lattice_box(f: GraphFamily, depth: int) -> Prefix:
    N = f.dimension
    sides = f.sides if f.sides is not None else (depth + 1,) * N
    if len(sides) != N:
        raise ValueError("sides must have one entry per dimension")
    total = math.prod(sides)
    if total > MAX_VERTICES:
        raise DepthLimitError(f"lattice box has {total} vertices")
    ell = f.lengths(1)
    width = len(str(max(sides)))

    def vid(p):
        return "p" + "_".join(f"{c:0{width}d}" for c in p)

    edges, shells = [], {}
    for p in itertools.product(*(range(s) for s in sides)):
        shells[vid(p)] = max(p)
        for ax in range(N):
            if p[ax] + 1 < sides[ax]:
                q = list(p)
                q[ax] += 1
                edges.append(Edge(f"{vid(p)}~{ax}", vid(p), vid(q), ell))
    g = MetricGraph.build(edges, _shell_alpha(f, shells), vertices=shells)
    # a fixed box is the whole graph, so every vertex counts as interior
    eff_depth = depth if f.sides is None else max(sides)
    return Prefix(g, shells, vid((0,) * N), eff_depth)


def _custom(f: GraphFamily, depth: int) -> Prefix:
    if f.generator is None:
        raise ValueError("custom family needs a generator")
    return f.generator(depth)


_BUILDERS = {
    "delta_line": _delta_line,
    "ladder": _ladder,
    "rooted_tree": _rooted_tree,
    "lattice_box": _lattice_box,
    "custom": _custom,
}


# presets used by the CLI and the experiment scripts
def example_tree(**kw) -> GraphFamily:
    """Tree with n_k = k + 1 children per vertex and one short edge 1/n_k each."""
    return GraphFamily("rooted_tree", degrees=power(1.0, offset=1.0), tree_lengths="short_edge",
                       depth_limit=6, name="example_tree", **kw)


def ladder(lengths: SeqRule | None = None, **kw) -> GraphFamily:
    return GraphFamily("ladder", lengths=lengths or geometric(0.5), name="ladder", **kw)


def delta_line(lengths: SeqRule | None = None, alpha: SeqRule = ZERO, **kw) -> GraphFamily:
    return GraphFamily("delta_line", lengths=lengths or constant(1.0), alpha=alpha,
                       depth_limit=4096, name="delta_line", **kw)


def binary_tree(ell: float = 1.0, **kw) -> GraphFamily:
    return GraphFamily("rooted_tree", degrees=constant(2.0), tree_lengths="radial",
                       lengths=constant(ell), depth_limit=16, name="binary_tree", **kw)


def lattice_box(dimension: int, sides=None, ell: float = 1.0, **kw) -> GraphFamily:
    if isinstance(sides, int):
        sides = (sides,) * dimension
    return GraphFamily("lattice_box", lengths=constant(ell), dimension=dimension,
                       sides=tuple(sides) if sides is not None else None, depth_limit=256,
                       name="lattice_box", **kw)


PRESETS: dict[str, Callable[[], GraphFamily]] = {
    "example_tree": example_tree,
    "ladder": ladder,
    "delta_line": delta_line,
    "delta_line_geometric": lambda: delta_line(geometric(0.5)),
    "delta_line_ismagilov": lambda: delta_line(power(-0.5)),
    "delta_line_harmonic": lambda: delta_line(harmonic()),
    "binary_tree": binary_tree,
    "lattice2": lambda: lattice_box(2),
    "lattice3": lambda: lattice_box(3),
}

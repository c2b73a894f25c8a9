"""Rule engine: self-adjointness, semiboundedness and spectral-type verdicts.

Every decision about an infinite family is taken symbolically from the tail
classes of its defining sequences. The generated prefix only supplies
evidence numbers; it is never extrapolated. Sufficient conditions that are
not met give ``Inconclusive``, never ``Fails``.

Rule keys:

======================================  =========================================
``bounded_weighted_degree``             sup Deg < inf  =>  H_alpha self-adjoint
``positive_min_length``                 inf |e| > 0    =>  H_alpha self-adjoint
``positive_min_measure``                inf m > 0      =>  H_0 self-adjoint
``natural_metric_complete``             rho_0 complete =>  H_0 self-adjoint
``m_metric_complete``                   rho_m complete =>  H_0 self-adjoint
``half_metric_incomplete``              rho_1/2 incomplete + witness => not s.a.
``ismagilov``                           sum |e_k|^2 = inf on the line => s.a.
``semibounded_iff_alpha_over_m``        bounded Deg: semibounded iff inf alpha/m > -inf
``semibounded_perturbation``            H_0 s.a. and inf alpha/m > -inf => semibounded
``nonnegative_form``                    alpha >= 0 => semibounded
``unbounded_coupling_on_paths``         sup |alpha|/deg = inf on every path => no ac
``compact_resolvent_difference``        (alpha - alpha~)/m in c0 => same ess spectrum
``trace_class_resolvent_difference``    (alpha - alpha~)/m in l1 => same ac spectrum
======================================  =========================================

A coupling-dependent rule proved for H_0 only transfers to H_alpha when
inf alpha/m > -inf is decided (``semibounded_perturbation``).
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .families import Asymptotic, GraphFamily, SeqRule, prefix
from .graph import _weights
from .metrics import path_metric

HOLDS, FAILS, INCONCLUSIVE = "Holds", "Fails", "Inconclusive"
CLAIMS = (
    "SelfAdjoint", "NotSelfAdjoint", "LowerSemibounded", "NotLowerSemibounded",
    "AcSpectrumEmpty", "SameEssentialSpectrum", "SameAcSpectrum",
)
NEGATION = {
    "SelfAdjoint": "NotSelfAdjoint", "NotSelfAdjoint": "SelfAdjoint",
    "LowerSemibounded": "NotLowerSemibounded", "NotLowerSemibounded": "LowerSemibounded",
}


@dataclass(frozen=True)
class Verdict:
    claim: str
    status: str
    rule: str
    evidence: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def verdicts_json(vs: list[Verdict]) -> str:
    return json.dumps([v.as_dict() for v in vs], indent=2, sort_keys=True, default=_jsonable)


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return str(x)


# ------------------------------------------------------------ tail algebra

ONE = Asymptotic(1.0)


def _shift(a: Asymptotic) -> Asymptotic:
    """Asymptotics of k -> a(k + 1)."""
    return Asymptotic(a.scale * a.base, a.base, a.power)


def _inv(a: Asymptotic | None) -> Asymptotic | None:
    if a is None or a.is_zero:
        return None
    return ONE / a


def _add(*xs):
    if any(x is None for x in xs):
        return None
    out = xs[0]
    for x in xs[1:]:
        out = out + x
        if out is None:
            return None
    return out


def _mul(a, b):
    return None if a is None or b is None else a * b


def _div(a, b):
    if a is None or b is None or b.is_zero:
        return None
    return a / b


def _all(xs):
    """Three-valued conjunction."""
    if any(x is False for x in xs):
        return False
    if any(x is None for x in xs):
        return None
    return True


def _pred(a, name):
    return None if a is None else bool(getattr(a, name)())


@dataclass
class Facts:
    """Symbolic facts about a family; each is True, False or None (undecided)."""

    finite: bool = False
    deg_bounded: bool | None = None
    inf_len_pos: bool | None = None
    sup_len_finite: bool | None = None
    inf_m_pos: bool | None = None
    total_length_finite: bool | None = None
    rho0_complete: bool | None = None
    rhom_complete: bool | None = None
    rho_half_incomplete: bool | None = None
    ismagilov: bool | None = None
    # asymptotics per vertex type along the shells
    m_types: list | None = None
    deg_types: list | None = None
    shell_count: Asymptotic | None = None
    notes: list = field(default_factory=list)


def family_facts(f: GraphFamily) -> Facts:
    if f.is_finite:
        return Facts(True, True, True, True, True, True, True, True, False,
                     None, None, None, None, ["finite graph"])
    return _FACTS.get(f.kind, _custom_facts)(f)


def _custom_facts(f: GraphFamily) -> Facts:
    return Facts(notes=["custom family: no symbolic tail model"])


def _delta_line_facts(f: GraphFamily) -> Facts:
    L = f.lengths.asymptotic()
    if L is None:
        return Facts(notes=["length tail unknown"])
    Ln = _shift(L)
    m = _add(L, Ln)
    Deg = _div(_add(_inv(L), _inv(Ln)), m)
    return Facts(
        deg_bounded=_pred(Deg, "bounded"),
        inf_len_pos=L.inf_positive(),
        sup_len_finite=L.bounded(),
        inf_m_pos=_pred(m, "inf_positive"),
        total_length_finite=L.summable(),
        rho0_complete=not L.summable(),
        rhom_complete=None if m is None else not m.summable(),
        rho_half_incomplete=(L**0.5).summable(),
        ismagilov=not (L**2).summable(),
        m_types=None if m is None else [m],
        deg_types=[Asymptotic(2.0)],
        shell_count=ONE,
    )


def _ladder_facts(f: GraphFamily) -> Facts:
    H, Vt = f.lengths.asymptotic(), f.vertical.asymptotic()
    if H is None or Vt is None:
        return Facts(notes=["length tail unknown"])
    Hn = _shift(H)
    m_c = _add(H, Hn, Vt * Asymptotic(2.0))
    Deg_c = _div(_add(_inv(H), _inv(Hn), _inv(Vt) * Asymptotic(2.0)), m_c)
    Deg_leg = _inv(Vt) ** 2 if Vt.scale else None
    spine_m = _add(m_c, _shift(m_c)) if m_c is not None else None
    return Facts(
        deg_bounded=_all([_pred(Deg_c, "bounded"), _pred(Deg_leg, "bounded")]),
        inf_len_pos=H.inf_positive() and Vt.inf_positive(),
        sup_len_finite=H.bounded() and Vt.bounded(),
        inf_m_pos=_all([Vt.inf_positive(), _pred(m_c, "inf_positive")]),
        total_length_finite=H.summable() and Vt.summable(),
        rho0_complete=not H.summable(),
        rhom_complete=None if spine_m is None else not spine_m.summable(),
        rho_half_incomplete=(H**0.5).summable(),
        m_types=None if m_c is None else [m_c, Vt],
        deg_types=[Asymptotic(4.0), ONE],
        shell_count=Asymptotic(3.0),
    )


def _tree_facts(f: GraphFamily) -> Facts:
    N = (f.degrees or SeqRule("power", scale=1.0, param=1.0, offset=1.0)).asymptotic()
    if N is None or N.tends_to_zero():
        return Facts(notes=["degree tail unknown"])
    Nn = _shift(N)
    # shell sizes are the running product of n_k: geometric only for constant n
    shells = None
    if f.degrees is not None and f.degrees.tail == "constant":
        shells = Asymptotic(1.0, N.scale, 0.0)
    if f.tree_lengths == "radial":
        L = f.lengths.asymptotic()
        if L is None:
            return Facts(notes=["length tail unknown"])
        Ln = _shift(L)
        m = _add(L, _mul(Nn, Ln))
        Deg = _div(_add(_inv(L), _div(Nn, Ln)), m)
        return Facts(
            deg_bounded=_pred(Deg, "bounded"),
            inf_len_pos=L.inf_positive(),
            sup_len_finite=L.bounded(),
            inf_m_pos=_pred(m, "inf_positive"),
            total_length_finite=_pred(_mul(shells, L), "summable"),
            rho0_complete=not L.summable(),
            rhom_complete=None if m is None else not m.summable(),
            rho_half_incomplete=(L**0.5).summable(),
            m_types=None if m is None else [m],
            deg_types=[_add(Nn, ONE)],
            shell_count=shells,
        )
    # one child edge of length 1/n, the others of length 1
    invN = _inv(N)
    # vertex reached by a short edge: sum 1/|e| ~ n_k + 2 n_{k+1}, m ~ n_{k+1}
    Deg_short = _div(_add(N, Nn * Asymptotic(2.0)), Nn)
    bounded_deg = _pred(Deg_short, "bounded")
    return Facts(
        deg_bounded=bounded_deg,
        inf_len_pos=N.bounded(),
        sup_len_finite=True,
        inf_m_pos=True,
        total_length_finite=False,
        rho0_complete=not invN.summable(),
        rhom_complete=True,
        rho_half_incomplete=(invN**0.5).summable(),
        m_types=[Nn],
        deg_types=[_add(Nn, ONE)],
        shell_count=shells,
        notes=["m ~ n_{k+1} on every shell"],
    )


def _lattice_facts(f: GraphFamily) -> Facts:
    L = f.lengths.asymptotic()
    return Facts(
        deg_bounded=True, inf_len_pos=True, sup_len_finite=True, inf_m_pos=True,
        total_length_finite=False, rho0_complete=True, rhom_complete=True,
        rho_half_incomplete=False,
        m_types=[Asymptotic(abs(L.scale) if L else 1.0)],
        deg_types=[Asymptotic(2.0 * f.dimension)],
        shell_count=Asymptotic(1.0, 1.0, f.dimension - 1.0),
        notes=["constant edge length"],
    )


_FACTS = {
    "delta_line": _delta_line_facts,
    "ladder": _ladder_facts,
    "rooted_tree": _tree_facts,
    "lattice_box": _lattice_facts,
}


# ------------------------------------------------------------ evidence


def prefix_evidence(f: GraphFamily, depth: int) -> dict:
    """Deterministic scalars from the generated prefix (interior vertices only,
    since the outermost shell is missing its outward edges)."""
    p = prefix(f, depth)
    g = p.graph
    w = _weights(g)
    ix = g.index
    inner = [ix[v] for v in p.interior()] or list(range(g.n))
    far = [v for v in g.vertices if p.shells[v] == max(p.shells.values())]
    ev = {
        "depth": depth,
        "vertices": g.n,
        "sup_Deg": float(np.max(w.Deg[inner])),
        "inf_m": float(np.min(w.m[inner])),
        "inf_length": min(e.length for e in g.edges),
        "sup_length": max(e.length for e in g.edges),
        "total_length": g.total_length(),
        "tails": f.tail_classes(),
    }
    for rule, key in (("natural", "rho0_escape"), ("m_sum", "rhom_escape"), ("sqrt", "rho_half_escape")):
        row = path_metric(g, rule).row(p.root)
        ev[key] = float(min(row[ix[v]] for v in far))
    return ev


def metric_completeness(f: GraphFamily, rule: str) -> str:
    """Complete / Incomplete / Inconclusive for the natural or m metric."""
    facts = family_facts(f)
    val = {"natural": facts.rho0_complete, "m_sum": facts.rhom_complete}[rule]
    if val is None:
        return "Inconclusive"
    return "Complete" if val else "Incomplete"


# ------------------------------------------------------------ alpha tails


def _alpha_over(alpha: SeqRule, types) -> list | None:
    a = alpha.asymptotic()
    if a is None or types is None or any(t is None for t in types):
        return None
    return [a / t if not t.is_zero else None for t in types]


def alpha_over_m_bounded_below(f: GraphFamily, alpha: SeqRule | None = None) -> bool | None:
    alpha = alpha if alpha is not None else f.alpha
    if f.is_finite:
        return True
    facts = family_facts(f)
    ratios = _alpha_over(alpha, facts.m_types)
    if ratios is None or any(r is None for r in ratios):
        return None
    return all(r.bounded_below() for r in ratios)


# ------------------------------------------------------------ checks


def _v(claim, status, rule, ev, **extra):
    return Verdict(claim, status, rule, {**ev, **extra})


def check_self_adjointness(f: GraphFamily, depth: int, witness: bool = False) -> list[Verdict]:
    """One verdict per rule, in a fixed order.

    ``witness`` declares a function with finite form and nonzero boundary
    trace; it is supplied automatically for the line with finite total length.
    """
    facts = family_facts(f)
    ev = prefix_evidence(f, depth)
    semib = alpha_over_m_bounded_below(f)
    alpha_zero = f.alpha.asymptotic() is not None and f.alpha.asymptotic().is_zero
    out = []

    def any_alpha(cond, rule, **extra):
        st = HOLDS if cond is True else INCONCLUSIVE
        out.append(_v("SelfAdjoint", st, rule, ev, hypothesis=cond, **extra))

    def kirchhoff_only(cond, rule, **extra):
        # proved for alpha = 0; carried to alpha when inf alpha/m > -inf
        ok = cond is True and (alpha_zero or semib is True)
        st = HOLDS if ok else INCONCLUSIVE
        out.append(_v("SelfAdjoint", st, rule, ev, hypothesis=cond,
                      alpha_over_m_bounded_below=semib, **extra))

    any_alpha(facts.deg_bounded, "bounded_weighted_degree")
    any_alpha(facts.inf_len_pos, "positive_min_length")
    kirchhoff_only(facts.inf_m_pos, "positive_min_measure")
    kirchhoff_only(facts.rho0_complete, "natural_metric_complete",
                   completeness=metric_completeness(f, "natural"))
    kirchhoff_only(facts.rhom_complete, "m_metric_complete",
                   completeness=metric_completeness(f, "m_sum"))

    auto_witness = f.kind == "delta_line" and facts.total_length_finite is True
    has_witness = witness or auto_witness
    # the non-self-adjointness survives only finitely supported couplings
    a = f.alpha.asymptotic()
    alpha_finite = a is not None and a.is_zero
    cond = _all([facts.rho_half_incomplete, True if has_witness else None])
    st = HOLDS if cond is True and alpha_finite else INCONCLUSIVE
    out.append(_v("NotSelfAdjoint", st, "half_metric_incomplete", ev,
                  hypothesis=cond, witness="constant" if auto_witness else bool(witness),
                  total_length_finite=facts.total_length_finite))

    if f.kind == "delta_line":
        any_alpha(facts.ismagilov, "ismagilov")

    _assert_consistent(out)
    return out


def _nonnegative(alpha: SeqRule) -> bool:
    # every closed-form shape is positive for k >= 1
    if alpha.tail == "unknown" or alpha.values is not None:
        return False
    return alpha.scale >= 0 and alpha.offset >= 0


def check_semiboundedness(f: GraphFamily, alpha: SeqRule | None = None, depth: int | None = None) -> Verdict:
    alpha = alpha if alpha is not None else f.alpha
    ff = f.with_alpha(alpha)
    facts = family_facts(ff)
    ev = {"tails": ff.tail_classes()}
    if depth is not None:
        p = prefix(ff, depth)
        w = _weights(p.graph)
        ix = p.graph.index
        inner = [ix[v] for v in p.interior()] or list(range(p.graph.n))
        ev["inf_alpha_over_m"] = float(np.min(np.asarray(p.graph.alpha)[inner] / w.m[inner]))
    if _nonnegative(alpha):
        return Verdict("LowerSemibounded", HOLDS, "nonnegative_form", ev)
    semib = alpha_over_m_bounded_below(ff, alpha)
    ev["alpha_over_m_bounded_below"] = semib
    if semib is None:
        return Verdict("LowerSemibounded", INCONCLUSIVE, "semibounded_iff_alpha_over_m", ev)
    if facts.deg_bounded is True:
        if semib:
            return Verdict("LowerSemibounded", HOLDS, "semibounded_iff_alpha_over_m", ev)
        return Verdict("NotLowerSemibounded", HOLDS, "semibounded_iff_alpha_over_m", ev)
    kirchhoff_sa = (facts.rhom_complete is True or facts.inf_m_pos is True
                    or facts.rho0_complete is True)
    if semib and kirchhoff_sa:
        return Verdict("LowerSemibounded", HOLDS, "semibounded_perturbation", ev)
    return Verdict("LowerSemibounded", INCONCLUSIVE, "semibounded_perturbation", ev)


def _self_adjoint_any(f: GraphFamily, alpha: SeqRule) -> bool:
    facts = family_facts(f)
    if facts.deg_bounded is True or facts.inf_len_pos is True:
        return True
    semib = alpha_over_m_bounded_below(f, alpha)
    h0 = facts.inf_m_pos is True or facts.rho0_complete is True or facts.rhom_complete is True
    return bool(h0 and semib)


def check_spectral_type(
    f: GraphFamily, alpha: SeqRule | None = None, alt_alpha: SeqRule | None = None
) -> list[Verdict]:
    """Singular-spectrum and resolvent-comparability verdicts.

    ``alt_alpha`` defaults to the zero coupling.
    """
    alpha = alpha if alpha is not None else f.alpha
    alt = alt_alpha if alt_alpha is not None else SeqRule("constant", scale=0.0)
    facts = family_facts(f)
    ev = {"tails": f.with_alpha(alpha).tail_classes(), "alt_alpha": alt.describe()}
    out = []
    if facts.finite:
        out.append(Verdict("AcSpectrumEmpty", INCONCLUSIVE, "unbounded_coupling_on_paths",
                           {**ev, "note": "finite graph; the rule concerns infinite paths"}))
    else:
        side = _all([facts.inf_len_pos, facts.sup_len_finite])
        ratios = _alpha_over(alpha, facts.deg_types)
        if ratios is None or any(r is None for r in ratios):
            cond = None
        else:
            # every infinite path meets all far shells, so one unbounded type suffices
            # only when every vertex type sees it
            cond = all(abs(r).unbounded() for r in ratios)
        st = HOLDS if side is True and cond is True else INCONCLUSIVE
        out.append(Verdict("AcSpectrumEmpty", st, "unbounded_coupling_on_paths",
                           {**ev, "length_bounds_decided": side, "sup_alpha_over_deg_infinite": cond}))

    sa = _self_adjoint_any(f, alpha) and _self_adjoint_any(f, alt)
    if alpha == alt:
        diff = [Asymptotic(0.0)]
    else:
        a, b = alpha.asymptotic(), alt.asymptotic()
        d = None if a is None or b is None else a - b
        diff = None if d is None or facts.m_types is None else [
            (d / t if not t.is_zero else None) if t is not None else None for t in facts.m_types
        ]
        if facts.finite:
            diff = [Asymptotic(0.0)]
    if diff is None or any(x is None for x in diff):
        c0 = l1 = None
    else:
        c0 = all(x.tends_to_zero() for x in diff)
        weighted = [_mul(facts.shell_count, abs(x)) if not x.is_zero else x for x in diff]
        l1 = None if any(x is None for x in weighted) else all(x.summable() for x in weighted)
    ev2 = {**ev, "self_adjoint_decided": sa, "in_c0": c0, "in_l1": l1}
    out.append(Verdict("SameEssentialSpectrum", HOLDS if sa and c0 else INCONCLUSIVE,
                       "compact_resolvent_difference", ev2))
    out.append(Verdict("SameAcSpectrum", HOLDS if sa and l1 else INCONCLUSIVE,
                       "trace_class_resolvent_difference", ev2))
    return out


def _assert_consistent(vs: list[Verdict]) -> None:
    held = {v.claim for v in vs if v.status == HOLDS}
    for c in held:
        if NEGATION.get(c) in held:
            raise AssertionError(f"contradictory verdicts {c} and {NEGATION[c]}")


def summarize(vs: list[Verdict]) -> dict:
    """First rule that decides each claim."""
    out = {}
    for v in vs:
        if v.status == HOLDS and v.claim not in out:
            out[v.claim] = v.rule
    return out

"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 flagged disagreement.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import criteria, estimates, families, laplacian, quantum
from .corpus import run_corpus
from .graph import MetricGraph, validate, weights
from .io import emit_graph, emit_report, parse_graph
from .metrics import is_intrinsic, path_metric

COMMANDS = (
    "validate", "assemble", "spectrum", "correspond", "metrics", "criteria",
    "cheeger", "heat", "clr", "generate", "corpus",
)


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    family: str | None = None
    depth: int = 5
    seed: int = 0
    n: int = 200
    tol: dict = field(default_factory=dict)
    out: str | None = None
    format: str = "json"
    options: dict = field(default_factory=dict)


class InputError(Exception):
    pass


def _load(cfg: RunConfig) -> MetricGraph:
    if cfg.input:
        try:
            data = Path(cfg.input).read_bytes()
        except OSError as exc:
            raise InputError(str(exc)) from exc
        return parse_graph(data)
    if cfg.family:
        return families.generate(_family(cfg.family), cfg.depth)
    raise InputError("either --input or --family is required")


def _family(name: str) -> families.GraphFamily:
    if name not in families.PRESETS:
        raise InputError(f"unknown family {name!r}; known: {', '.join(sorted(families.PRESETS))}")
    return families.PRESETS[name]()


def _tol_report(**kw) -> dict:
    base = {"zero_rtol": laplacian.ZERO_RTOL, "pole_guard": quantum.POLE_GUARD,
            "bisect_rtol": quantum.BISECT_RTOL}
    base.update(kw)
    return base


def run(cfg: RunConfig) -> tuple[int, object]:
    """Execute one command; returns (exit code, report)."""
    cmd = cfg.command
    o = cfg.options
    if cmd not in COMMANDS:
        raise InputError(f"unknown command {cmd!r}")

    if cmd == "validate":
        g = _load_unchecked(cfg)
        diags = [str(d) for d in validate(g)]
        return (1 if diags else 0), {"valid": not diags, "diagnostics": diags}

    if cmd == "generate":
        if not cfg.family:
            raise InputError("--family is required")
        return 0, emit_graph(families.generate(_family(cfg.family), cfg.depth))

    if cmd == "corpus":
        rep = run_corpus(cfg.n, cfg.seed, int(o.get("max_vertices", 10)))
        if not o.get("full"):
            rep.pop("reports")
        return (2 if rep["disagreements"] or rep["positivity_disagreements"] else 0), rep

    if cmd == "criteria":
        if not cfg.family:
            raise InputError("--family is required")
        f = _family(cfg.family)
        vs = criteria.check_self_adjointness(f, cfg.depth)
        vs.append(criteria.check_semiboundedness(f, depth=cfg.depth))
        vs.extend(criteria.check_spectral_type(f))
        return 0, [v.as_dict() for v in vs]

    g = _load(cfg)

    if cmd == "assemble":
        op = laplacian.degree_weighted_variant(g) if o.get("degree") else laplacian.assemble(g)
        if cfg.format == "csv":
            return 0, laplacian.triplets_csv(op, symmetrized=bool(o.get("symmetrized"))).encode()
        return 0, {"basis": op.basis, "measure": op.measure, "alpha": op.alpha,
                   "H": op.dense(), "symmetrized": op.dense_symmetrized(),
                   "tolerances": _tol_report()}

    if cmd == "spectrum":
        method = o.get("method", "discrete")
        rep = {"tolerances": _tol_report()}
        code = 0
        if method in ("discrete", "both"):
            ds = laplacian.eigen(laplacian.assemble(g))
            rep["discrete"] = {"eigenvalues": ds.eigenvalues, "kappa_minus": ds.kappa_minus,
                               "near_degenerate": ds.near_degenerate, "tol_zero": ds.tol_zero}
        if method in ("quantum", "both"):
            lam = float(o.get("lam", 50.0))
            res = quantum.eigenvalues_below(g, lam)
            rep["quantum"] = {"rows": res.to_rows(), "kappa_minus": res.kappa_minus,
                              "flags": sorted(res.flags), "below": lam}
            if "count-mismatch" in res.flags:
                code = 2
            if cfg.format == "csv":
                return code, emit_report(res.to_rows(), "csv")
        return code, rep

    if cmd == "correspond":
        rep = quantum.correspondence_report(g)
        return (0 if rep["agree"] and not rep["flags"] else 2), rep

    if cmd == "metrics":
        rule = o.get("rule", "natural")
        pm = path_metric(g, rule)
        if cfg.format == "csv":
            return 0, pm.to_csv().encode()
        ir = is_intrinsic(g, pm)
        return 0, {"rule": rule, "distances": pm.matrix(), "basis": g.vertices,
                   "intrinsic": ir.intrinsic, "worst_vertex": ir.worst_vertex,
                   "worst_slack": ir.worst_slack, "weights": weights(g).as_dict()}

    if cmd == "cheeger":
        dom = o.get("domain")
        if not dom:
            raise InputError("--domain is required")
        c = estimates.cheeger_bound_check(g, dom)
        iso = estimates.isoperimetric(g, dom, method=o.get("iso_method", "exact"))
        return (0 if c.holds else 2), {
            "lambda_min_dirichlet": c.lambda_min_dirichlet, "constant": iso.constant,
            "half_C_squared": c.half_C_squared, "holds": c.holds, "argmin": iso.argmin,
            "method": iso.method,
        }

    if cmd == "heat":
        t = np.geomspace(float(o.get("tmin", 0.1)), float(o.get("tmax", 100.0)), int(o.get("points", 40)))
        window = (float(o.get("fit_lo", 1.0)), float(o.get("fit_hi", 50.0)))
        fit = estimates.heat_decay(g, t, window)
        if cfg.format == "csv":
            return 0, fit.to_csv().encode()
        return 0, {"t": fit.t, "g": fit.g, "exponent": fit.exponent, "window": fit.window,
                   "saturation": fit.saturation, "residual": fit.residual}

    if cmd == "clr":
        alpha = np.abs(np.asarray(g.alpha))
        lams = [float(x) for x in str(o.get("lambdas", "1,2,3,4,5")).split(",")]
        rows = estimates.clr_sweep(g.with_alpha([0.0] * g.n), alpha, float(o.get("D", 3.0)), lams)
        if cfg.format == "csv":
            return 0, estimates.clr_csv(rows).encode()
        bad = any(r.kappa_discrete != r.kappa_quantum for r in rows if not r.flags)
        return (2 if bad else 0), {"rows": [r.__dict__ for r in rows]}

    raise InputError(f"unhandled command {cmd!r}")  # pragma: no cover


def _load_unchecked(cfg: RunConfig) -> MetricGraph:
    """Like _load, but returns structurally invalid graphs for diagnosis."""
    import json

    from .graph import Edge

    if not cfg.input:
        return _load(cfg)
    try:
        doc = json.loads(Path(cfg.input).read_text())
        vs = {str(v["id"]): float(v.get("alpha", 0.0)) for v in doc["vertices"]}
        es = tuple(Edge(str(e["id"]), str(e["tail"]), str(e["head"]), float(e["length"]))
                   for e in doc["edges"])
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read graph: {exc}") from exc
    order = tuple(sorted(vs))
    return MetricGraph(order, es, tuple(vs[v] for v in order))


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; that code is reserved for disagreements here
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qgs", description="Quantum graph and weighted Laplacian spectra.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input")
    p.add_argument("--family")
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                   help="override a module tolerance, e.g. zero_rtol=1e-9")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--max-vertices", type=int, default=10)
    p.add_argument("--method", choices=("discrete", "quantum", "both"), default="discrete")
    p.add_argument("--lam", type=float, default=50.0, help="spectral cutoff for the secular solver")
    p.add_argument("--rule", default="natural")
    p.add_argument("--domain", help="comma separated vertex ids")
    p.add_argument("--lambdas", default="1,2,3,4,5")
    p.add_argument("--D", type=float, default=3.0)
    p.add_argument("--degree", action="store_true", help="use the degree-weighted variant")
    p.add_argument("--full", action="store_true", help="include per-instance corpus reports")
    return p


_TOL_TARGETS = {
    "zero_rtol": (laplacian, "ZERO_RTOL"),
    "pole_guard": (quantum, "POLE_GUARD"),
    "bisect_rtol": (quantum, "BISECT_RTOL"),
}


def _apply_tolerances(tol: dict) -> None:
    for name, value in tol.items():
        if name not in _TOL_TARGETS:
            raise InputError(f"unknown tolerance {name!r}")
        mod, attr = _TOL_TARGETS[name]
        setattr(mod, attr, float(value))


def config_from_args(argv=None) -> RunConfig:
    a = build_parser().parse_args(argv)
    tol = {}
    for item in a.tol:
        if "=" not in item:
            raise InputError(f"--tol expects NAME=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        tol[k] = float(v)
    opts = {"max_vertices": a.max_vertices, "method": a.method, "lam": a.lam, "rule": a.rule,
            "lambdas": a.lambdas, "D": a.D, "degree": a.degree, "full": a.full}
    if a.domain:
        opts["domain"] = [s.strip() for s in a.domain.split(",") if s.strip()]
    return RunConfig(a.command, a.input, a.family, a.depth, a.seed, a.n, tol, a.out, a.format, opts)


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
        _apply_tolerances(cfg.tol)
        code, report = run(cfg)
    except (InputError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    data = report if isinstance(report, bytes) else emit_report(report, cfg.format)
    if cfg.out:
        Path(cfg.out).write_bytes(data)
    else:
        sys.stdout.write(data.decode())
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

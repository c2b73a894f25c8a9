"""Graph JSON parsing and report serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Any

import numpy as np

from .graph import Diagnostic, Edge, InvalidGraphError, MetricGraph, validate


def _fail(code: str, subject: str, msg: str = ""):
    raise InvalidGraphError([Diagnostic(code, subject, msg)])


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        _fail("BadNumber", where, f"expected a number, got {x!r}")
    return float(x)


def graph_from_dict(doc: Any) -> MetricGraph:
    """Build and validate a graph from the parsed JSON document."""
    if not isinstance(doc, dict):
        _fail("BadDocument", "-", "top level must be an object")
    for key in ("vertices", "edges"):
        if key not in doc:
            _fail("MissingField", key)
        if not isinstance(doc[key], list):
            _fail("BadDocument", key, "must be a list")
    alpha, ids = {}, []
    for k, v in enumerate(doc["vertices"]):
        if not isinstance(v, dict) or "id" not in v:
            _fail("MissingField", f"vertices[{k}].id")
        vid = str(v["id"])
        if vid in alpha:
            _fail("DuplicateId", vid, "vertex id used twice")
        alpha[vid] = _number(v.get("alpha", 0.0), f"{vid}.alpha")
        ids.append(vid)
    edges = []
    for k, e in enumerate(doc["edges"]):
        if not isinstance(e, dict):
            _fail("BadDocument", f"edges[{k}]")
        for key in ("id", "tail", "head", "length"):
            if key not in e:
                _fail("MissingField", f"edges[{k}].{key}")
        edges.append(Edge(str(e["id"]), str(e["tail"]), str(e["head"]),
                          _number(e["length"], f"{e['id']}.length")))
    order = tuple(sorted(ids))
    g = MetricGraph(order, tuple(edges), tuple(alpha[v] for v in order))
    diags = validate(g)
    if diags:
        raise InvalidGraphError(diags)
    return g


def parse_graph(data: bytes | str) -> MetricGraph:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        _fail("MalformedJSON", "-", str(exc))
    return graph_from_dict(doc)


def graph_to_dict(g: MetricGraph) -> dict:
    """Normalized form: vertices and edges sorted by id."""
    return {
        "vertices": [{"id": v, "alpha": a} for v, a in zip(g.vertices, g.alpha)],
        "edges": [
            {"id": e.id, "tail": e.tail, "head": e.head, "length": e.length}
            for e in sorted(g.edges, key=lambda e: e.id)
        ],
    }


def emit_graph(g: MetricGraph) -> bytes:
    return (json.dumps(graph_to_dict(g), indent=2) + "\n").encode()


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_clean(v) for v in x)
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def emit_report(report, fmt: str = "json") -> bytes:
    """JSON for any report; CSV for a list of flat row dicts."""
    if fmt == "json":
        return (json.dumps(_clean(report), indent=2, sort_keys=True) + "\n").encode()
    if fmt == "csv":
        rows = report if isinstance(report, list) else report.get("rows")
        if not rows:
            raise ValueError("CSV output needs a non-empty list of rows")
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(_clean(r))
        return buf.getvalue().encode()
    raise ValueError(f"unknown format {fmt!r}")

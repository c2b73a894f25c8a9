"""Seeded random graphs and the correspondence corpus runner."""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .graph import MetricGraph
from .quantum import correspondence_report

CORPUS_H = 0.25
CORPUS_MIN_CELLS = 2


def random_graph(
    rng: np.random.Generator,
    n_vertices: int | None = None,
    max_vertices: int = 10,
    min_vertices: int = 3,
    length_range=(0.1, 2.0),
    alpha_range=(-10.0, 10.0),
) -> MetricGraph:
    """Connected simple G(n, p) sample with uniform lengths and couplings.

    Connectivity is obtained by rejection, so the law is G(n, p) conditioned
    on being connected.
    """
    n = int(n_vertices or rng.integers(min_vertices, max_vertices + 1))
    p = rng.uniform(0.3, 0.8)
    while True:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        if _connected(n, pairs):
            break
    width = len(str(n - 1))
    vid = [f"v{i:0{width}d}" for i in range(n)]
    lengths = rng.uniform(*length_range, size=len(pairs))
    alpha = rng.uniform(*alpha_range, size=n)
    edges = [(f"e{k:03d}", vid[i], vid[j], float(l)) for k, ((i, j), l) in enumerate(zip(pairs, lengths))]
    return MetricGraph.build(edges, dict(zip(vid, alpha.tolist())))


def random_tree(rng: np.random.Generator, n: int, length_range=(0.1, 2.0), alpha_range=(-10.0, 10.0)):
    vid = [f"v{i:02d}" for i in range(n)]
    edges = [(f"e{i:02d}", vid[int(rng.integers(0, i))], vid[i], float(rng.uniform(*length_range)))
             for i in range(1, n)]
    return MetricGraph.build(edges, dict(zip(vid, rng.uniform(*alpha_range, size=n).tolist())))


def _connected(n: int, pairs) -> bool:
    adj = [[] for _ in range(n)]
    for i, j in pairs:
        adj[i].append(j)
        adj[j].append(i)
    seen, stack = {0}, [0]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def corpus_graphs(n: int, seed: int, max_vertices: int = 10) -> list[MetricGraph]:
    """``n`` graphs, each from its own child stream of ``seed``."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [random_graph(np.random.default_rng(c), max_vertices=max_vertices) for c in children]


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("QGS_THREADS", "1")))
    except ValueError:
        return 1


def _one(g: MetricGraph) -> dict:
    return correspondence_report(g, CORPUS_H, CORPUS_MIN_CELLS)


def run_corpus(n: int, seed: int, max_vertices: int = 10, workers: int | None = None) -> dict:
    """Correspondence statistics over a seeded corpus.

    Instances flagged near-degenerate (or with unstable mesh counts) are
    excluded from the agreement tally and counted separately.
    """
    t0 = time.perf_counter()
    graphs = corpus_graphs(n, seed, max_vertices)
    workers = workers or worker_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            reports = list(ex.map(_one, graphs, chunksize=4))
    else:
        reports = [_one(g) for g in graphs]
    flagged = [i for i, r in enumerate(reports) if r["flags"]]
    checked = [i for i in range(n) if i not in set(flagged)]
    kappa_bad = [i for i in checked if reports[i]["kappa_minus_quantum"] != reports[i]["kappa_minus_discrete"]]
    sign_bad = [
        i for i, r in enumerate(reports)
        if abs(r["lambda_min_quantum"]) > 1e-4 and abs(r["lambda_min_discrete"]) > 1e-4
        and (r["lambda_min_quantum"] < 0) != (r["lambda_min_discrete"] < 0)
    ]
    return {
        "instances": n,
        "seed": seed,
        "max_vertices": max_vertices,
        "flagged": len(flagged),
        "flagged_indices": flagged,
        "disagreements": len(kappa_bad),
        "disagreement_indices": kappa_bad,
        "positivity_disagreements": len(sign_bad),
        "kappa_minus_histogram": _hist([reports[i]["kappa_minus_discrete"] for i in range(n)]),
        "runtime_seconds": time.perf_counter() - t0,
        "workers": workers,
        "tolerances": {"fem_h": CORPUS_H, "fem_min_cells": CORPUS_MIN_CELLS,
                       "positivity_threshold": 1e-4, "zero_rtol": 1e-10},
        "reports": reports,
    }


def _hist(xs) -> dict:
    out: dict[int, int] = {}
    for x in xs:
        out[int(x)] = out.get(int(x), 0) + 1
    return dict(sorted(out.items()))

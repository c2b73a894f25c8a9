"""Negative-count and positivity agreement over a seeded random corpus.

    python scripts/run_corpus.py --n 200 --seed 7 --out corpus.json

QGS_THREADS sets the worker count.
"""
import argparse
import json
import sys

from qgs.corpus import run_corpus
from qgs.io import emit_report


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--max-vertices", type=int, default=10)
    ap.add_argument("--out")
    a = ap.parse_args()
    rep = run_corpus(a.n, a.seed, a.max_vertices)
    rep.pop("reports")
    data = emit_report(rep)
    if a.out:
        open(a.out, "wb").write(data)
    summary = {k: rep[k] for k in ("instances", "flagged", "disagreements", "positivity_disagreements")}
    print(json.dumps(summary), f"runtime {rep['runtime_seconds']:.2f}s", file=sys.stderr)
    if not a.out:
        sys.stdout.write(data.decode())
    return 2 if rep["disagreements"] or rep["positivity_disagreements"] else 0


if __name__ == "__main__":
    sys.exit(main())

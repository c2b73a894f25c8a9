import numpy as np
import pytest

from qgs.corpus import random_graph
from qgs.graph import MetricGraph

ACCEPTANCE_LINES: list[str] = []


def seeded_graphs(count: int, seed: int, max_vertices: int = 10, **kw) -> list[MetricGraph]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [random_graph(np.random.default_rng(c), max_vertices=max_vertices, **kw) for c in children]


def path_graph(lengths, alpha=None) -> MetricGraph:
    ids = [str(i + 1) for i in range(len(lengths) + 1)]
    edges = [(f"e{i}", ids[i], ids[i + 1], float(l)) for i, l in enumerate(lengths)]
    return MetricGraph.build(edges, alpha)


def star(lengths, alpha=None) -> MetricGraph:
    edges = [(f"e{i}", "c", f"l{i}", float(l)) for i, l in enumerate(lengths)]
    return MetricGraph.build(edges, alpha)


@pytest.fixture(scope="session")
def corpus_graphs_50():
    return seeded_graphs(50, 20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

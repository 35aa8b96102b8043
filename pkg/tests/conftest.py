import networkx as nx
import numpy as np
import pytest

from szcommunity.graph import build_graph
from szcommunity.walk import available_backends

from oracles import TWO_TRIANGLES


@pytest.fixture
def two_triangles():
    return build_graph(7, TWO_TRIANGLES)


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


def random_connected_graph(rng, n_max=25, min_n=2):
    """Random connected simple graph: a random spanning tree plus extra edges."""
    n = int(rng.integers(min_n, n_max + 1))
    edges = [(int(rng.integers(v)), v) for v in range(1, n)]
    extra = int(rng.integers(0, n + 1))
    for _ in range(extra):
        u, v = rng.integers(n, size=2)
        edges.append((int(u), int(v)))
    perm = rng.permutation(n)
    return build_graph(n, [(int(perm[u]), int(perm[v])) for u, v in edges])


def atlas_connected(max_edges):
    """Every connected graph (up to isomorphism) with 1..max_edges edges."""
    out = []
    for G in nx.graph_atlas_g()[1:]:
        if 0 < G.number_of_edges() <= max_edges and nx.is_connected(G):
            out.append(build_graph(G.number_of_nodes(), sorted(G.edges())))
    return out


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Reporter for acceptance criteria: prints one PASS/FAIL line, then asserts."""

    def report(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)

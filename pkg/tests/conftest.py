import networkx as nx
import numpy as np
import pytest

from mospecg import Graph
from mospecg.datasets import karate


def two_triangles():
    """Triangles {0,1,2} and {3,4,5} joined by the bridge 2-3; 2m = 14."""
    return Graph.from_edges([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)],
                            name="two_triangles")


def random_connected_graphs(count, n_min=3, n_max=8, seed=12345, weighted=False):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(n_min, n_max + 1))
        h = nx.gnp_random_graph(n, float(rng.uniform(0.25, 0.7)), seed=int(rng.integers(2**31)))
        if h.number_of_edges() == 0 or not nx.is_connected(h):
            continue
        edges = list(h.edges())
        w = rng.uniform(0.5, 2.0, len(edges)) if weighted else None
        out.append(Graph.from_edges(edges, w, n=n, name=f"gnp{len(out)}"))
    return out


@pytest.fixture
def k2():
    return Graph.from_edges([(0, 1)], name="k2")


@pytest.fixture
def p3():
    return Graph.from_edges([(0, 1), (1, 2)], name="p3")


@pytest.fixture(name="two_triangles")
def two_triangles_fixture():
    return two_triangles()


@pytest.fixture(scope="session")
def karate_data():
    return karate()


def small_fixtures():
    return [two_triangles(), Graph.from_edges([(0, 1)]), Graph.from_edges([(0, 1), (1, 2)]),
            *random_connected_graphs(6), *random_connected_graphs(3, seed=7, weighted=True)]


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)

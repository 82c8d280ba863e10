"""Shared fixtures: small named graphs and the seeded evaluation corpus."""

import pytest

from rolewire.generators import erdos_renyi, make_graph
from rolewire.graph import Graph, graph_from_edges
from rolewire.seeding import rng_for


def star_graph(leaves: int) -> Graph:
    return graph_from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def path_graph(n: int) -> Graph:
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return graph_from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def grid_graph(rows: int, cols: int) -> Graph:
    edges = []
    for i in range(rows):
        for j in range(cols):
            u = i * cols + j
            if j + 1 < cols:
                edges.append((u, u + 1))
            if i + 1 < rows:
                edges.append((u, u + cols))
    return graph_from_edges(rows * cols, edges)


def corpus_graphs() -> list[tuple[str, Graph]]:
    """The >= 50-graph corpus used by the acceptance criteria.

    Stars up to 8 leaves, cycles/paths/grids/ladders/trees up to 64 nodes,
    and seeded Erdos-Renyi draws at n in {16, 32, 64}, p in {0.1, 0.3}.
    """
    graphs: list[tuple[str, Graph]] = []
    for m in range(1, 9):
        graphs.append((f"star{m}", star_graph(m)))
    for n in (3, 4, 5, 6, 8, 12, 16, 32, 64):
        graphs.append((f"cycle{n}", cycle_graph(n)))
    for n in (2, 3, 4, 5, 8, 16, 33, 64):
        graphs.append((f"path{n}", path_graph(n)))
    for rows, cols in ((2, 2), (2, 3), (3, 3), (3, 4), (4, 4), (4, 8), (8, 8)):
        graphs.append((f"grid{rows}x{cols}", grid_graph(rows, cols)))
    for n in (4, 6, 8, 12, 16, 32):
        graphs.append((f"ladder{n}", make_graph("ladder", n)))
    for n in (3, 7, 10, 15, 20, 31, 63):
        graphs.append((f"tree{n}", make_graph("tree", n)))
    for n in (16, 32, 64):
        for p in (0.1, 0.3):
            for seed in (0, 1):
                rng = rng_for(seed, 0)
                graphs.append((f"er{n}_{int(p * 10)}_{seed}",
                               erdos_renyi(n, rng, p=p)))
    return graphs


@pytest.fixture(scope="session")
def corpus() -> list[tuple[str, Graph]]:
    graphs = corpus_graphs()
    assert len(graphs) >= 50
    return graphs


@pytest.fixture
def star4() -> Graph:
    return star_graph(3)


@pytest.fixture
def p3() -> Graph:
    return path_graph(3)


@pytest.fixture
def c4() -> Graph:
    return cycle_graph(4)


@pytest.fixture
def k4() -> Graph:
    return complete_graph(4)

import itertools

import networkx as nx
import pytest

from domkernel.graph import Graph


def from_nx(h) -> Graph:
    h = nx.convert_node_labels_to_integers(h, ordering="sorted")
    return Graph.from_edges(h.number_of_nodes(), list(h.edges()))


def floyd_warshall(g: Graph) -> list[list[float]]:
    n = g.n
    inf = float("inf")
    d = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for u, v in g.edges():
        d[u][v] = d[v][u] = 1
    for w in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][w] + d[w][j] < d[i][j]:
                    d[i][j] = d[i][w] + d[w][j]
    return d


def all_graphs(n: int):
    """Every labelled graph on n vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


@pytest.fixture
def p7():
    return Graph.from_edges(7, [(i, i + 1) for i in range(6)])


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    print(line)
    ACCEPTANCE.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)

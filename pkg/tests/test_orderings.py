import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from domkernel.generators import cycle, grid, path, random_bounded_degree, subdivided_clique
from domkernel.graph import Graph
from domkernel.orderings import Ordering, admissibility_ordering, degeneracy_ordering, weak_reach

K4 = Graph.from_edges(4, list(itertools.combinations(range(4), 2)))


def brute_weak_reach(g, sigma, m):
    """B(v) by enumerating simple paths of length <= m from v."""
    pos = sigma.position
    out = {v: set() for v in range(g.n)}
    for v in range(g.n):
        stack = [(v, (v,))]
        while stack:
            x, p = stack.pop()
            if len(p) - 1 >= m:
                continue
            for w in g.adj[x]:
                if w in p:
                    continue
                q = p + (w,)
                # interior must rank after the endpoint w
                if pos[w] < pos[v] and all(pos[i] > pos[w] for i in q[1:-1]):
                    out[v].add(w)
                stack.append((w, q))
    return out


def test_ordering_bijection():
    o = Ordering.from_sequence([2, 0, 1])
    assert o.position[2] == 0 and o.order[o.position[1]] == 1
    with pytest.raises(ValueError):
        Ordering.from_sequence([0, 0, 1])


def test_degeneracy_examples():
    assert degeneracy_ordering(path(9))[1] == 1
    assert degeneracy_ordering(K4)[1] == 3
    assert degeneracy_ordering(subdivided_clique(5, 1))[1] == 2
    assert degeneracy_ordering(Graph.empty(0))[1] == 0


def test_degeneracy_back_degree():
    g = random_bounded_degree(30, 3, 4)
    sigma, d = degeneracy_ordering(g)
    back = max(sum(1 for w in g.adj[v] if sigma.position[w] < sigma.position[v]) for v in range(g.n))
    assert back == d


def test_path_cbound():
    for m in (1, 2, 3):
        g = path(12)
        assert weak_reach(g, admissibility_ordering(g, m), m).c_bound <= 2 * m + 1


def test_k4_cbound():
    assert weak_reach(K4, admissibility_ordering(K4, 2), 2).c_bound == 4


def test_empty_and_single():
    assert weak_reach(Graph.empty(0), Ordering.identity(0), 2).c_bound == 1
    rep = weak_reach(Graph.empty(1), Ordering.identity(1), 3)
    assert rep.per_vertex[0] == frozenset() and rep.c_bound == 1


def test_path_identity_order():
    rep = weak_reach(path(3), Ordering.identity(3), 2)
    assert rep.per_vertex[2] == {0, 1}
    assert rep.c_bound == 3


def test_radius_one_is_earlier_neighbourhood():
    g = grid(4, 5)
    sigma = admissibility_ordering(g, 2)
    rep = weak_reach(g, sigma, 1)
    for v in range(g.n):
        assert rep.per_vertex[v] == {w for w in g.adj[v] if sigma.position[w] < sigma.position[v]}


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 11), st.integers(1, 3), st.integers(0, 10**6), st.integers(1, 3))
def test_weak_reach_matches_path_enumeration(n, d, seed, m):
    if n * d % 2:
        n += 1
    g = random_bounded_degree(n, d, seed)
    sigma = admissibility_ordering(g, m)
    rep = weak_reach(g, sigma, m)
    want = brute_weak_reach(g, sigma, m)
    for v in range(g.n):
        assert rep.per_vertex[v] == want[v]
        assert all(sigma.position[u] < sigma.position[v] for u in rep.per_vertex[v])


def test_monotone_in_radius():
    g = cycle(12)
    sigma = admissibility_ordering(g, 3)
    reps = [weak_reach(g, sigma, m) for m in (1, 2, 3)]
    for a, b in zip(reps, reps[1:]):
        assert all(a.per_vertex[v] <= b.per_vertex[v] for v in range(g.n))


def test_within_smaller_radius():
    g = grid(4, 4)
    sigma = admissibility_ordering(g, 4)
    big = weak_reach(g, sigma, 4)
    small = weak_reach(g, sigma, 2)
    for v in range(g.n):
        assert big.within(v, 2) == small.per_vertex[v]


def test_deterministic():
    g = random_bounded_degree(40, 3, 9)
    assert admissibility_ordering(g, 2).order == admissibility_ordering(g, 2).order

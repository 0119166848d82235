"""Vertex orderings and weakly reachable sets.

The ordering used by the approximation is only as good as its measured
weak-reach bound, so :func:`weak_reach` is exact while
:func:`admissibility_ordering` is a greedy heuristic.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

from .graph import Graph, ball

__all__ = [
    "Ordering",
    "WeakReachReport",
    "admissibility_ordering",
    "degeneracy_ordering",
    "weak_reach",
]


@dataclass(frozen=True)
class Ordering:
    """A linear order of the vertices; ``order[i]`` is the vertex of rank ``i``."""

    order: tuple[int, ...]
    position: tuple[int, ...]

    @classmethod
    def from_sequence(cls, seq: Sequence[int]) -> "Ordering":
        order = tuple(seq)
        position = [-1] * len(order)
        for rank, v in enumerate(order):
            if not 0 <= v < len(order) or position[v] != -1:
                raise ValueError("sequence is not a permutation of 0..n-1")
            position[v] = rank
        return cls(order, tuple(position))

    @classmethod
    def identity(cls, n: int) -> "Ordering":
        return cls.from_sequence(range(n))

    def __len__(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class WeakReachReport:
    radius: int
    per_vertex: Mapping[int, frozenset[int]]
    c_bound: int
    # distance realised by the shortest certifying path for each (v, u in B(v))
    reach_dist: Mapping[int, Mapping[int, int]]

    def within(self, v: int, radius: int) -> frozenset[int]:
        """B(v) restricted to certifying paths of length at most ``radius``."""
        if radius >= self.radius:
            return self.per_vertex[v]
        d = self.reach_dist[v]
        return frozenset(u for u in self.per_vertex[v] if d[u] <= radius)


def degeneracy_ordering(g: Graph) -> tuple[Ordering, int]:
    """Min-degree peeling; the first vertex peeled is ranked last.

    Every vertex then has at most ``degeneracy`` neighbours ranked before it.
    """
    n = g.n
    deg = [g.degree(v) for v in range(n)]
    heap = [(deg[v], v) for v in range(n)]
    heapq.heapify(heap)
    removed = [False] * n
    peeled: list[int] = []
    degeneracy = 0
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        peeled.append(v)
        degeneracy = max(degeneracy, d)
        for w in g.adj[v]:
            if not removed[w]:
                deg[w] -= 1
                heapq.heappush(heap, (deg[w], w))
    return Ordering.from_sequence(reversed(peeled)), degeneracy


def _back_reach(g: Graph, v: int, m: int, placed: list[bool], cap: int | None) -> int:
    # unplaced vertices reachable from v by paths of length <= m with placed interiors
    seen = {v}
    frontier = deque([(v, 0)])
    count = 0
    while frontier:
        u, d = frontier.popleft()
        if d == m:
            continue
        for w in g.adj[u]:
            if w in seen:
                continue
            seen.add(w)
            if placed[w]:
                frontier.append((w, d + 1))
            else:
                count += 1
                if cap is not None and count >= cap:
                    return cap
    return count


def admissibility_ordering(g: Graph, m: int, cap: int | None = None) -> Ordering:
    """Greedy back-to-front ordering for ``m``-admissibility.

    Repeatedly ranks last (among the unplaced vertices) the one with the
    fewest unplaced vertices reachable through already-placed vertices by a
    path of length at most ``m``; ties go to the lower degree, then the
    lowest id, which keeps hubs early. For ``m == 1`` this is min-degree
    peeling.
    """
    if m < 1:
        raise ValueError("m must be positive")
    n = g.n
    placed = [False] * n
    score = [_back_reach(g, v, m, placed, cap) for v in range(n)]
    heap = [(score[v], g.degree(v), v) for v in range(n)]
    heapq.heapify(heap)
    back_to_front: list[int] = []
    while heap:
        s, _, v = heapq.heappop(heap)
        if placed[v] or s != score[v]:
            continue
        placed[v] = True
        back_to_front.append(v)
        # only scores of vertices within distance m of v can change
        for u in sorted(ball(g, v, m)):
            if not placed[u]:
                new = _back_reach(g, u, m, placed, cap)
                if new != score[u]:
                    score[u] = new
                    heapq.heappush(heap, (new, g.degree(u), u))
    return Ordering.from_sequence(reversed(back_to_front))


def weak_reach(g: Graph, sigma: Ordering, m: int) -> WeakReachReport:
    """Exact weakly ``m``-reachable sets under ``sigma``.

    ``u`` is in ``B(v)`` when ``u`` precedes ``v`` and some path of length at
    most ``m`` joins them with every internal vertex ranked after ``u``. One
    BFS per ``u`` restricted to vertices ranked after ``u`` finds all such
    ``v`` at once.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if len(sigma) != g.n:
        raise ValueError("ordering does not match graph size")
    pos = sigma.position
    reach: dict[int, dict[int, int]] = {v: {} for v in range(g.n)}
    for u in range(g.n):
        pu = pos[u]
        dist = {u: 0}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            d = dist[x]
            if d == m:
                continue
            for w in g.adj[x]:
                if w not in dist and pos[w] > pu:
                    dist[w] = d + 1
                    reach[w][u] = d + 1
                    queue.append(w)
    per_vertex = {v: frozenset(r) for v, r in reach.items()}
    c_bound = 1 + max((len(b) for b in per_vertex.values()), default=0)
    return WeakReachReport(m, per_vertex, c_bound, reach)

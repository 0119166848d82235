"""r-projections, the contraction-based r-closure and the short-paths closure."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .graph import ContractViolation, Graph, _bfs, bfs_within_avoiding

__all__ = [
    "Closure",
    "DensityWitness",
    "ProjectionProfile",
    "ShortPathsClosure",
    "audit_closure",
    "projection",
    "projection_profile",
    "r_closure",
    "short_paths_closure",
]


def projection(g: Graph, X: Iterable[int] | frozenset[int], u: int, r: int) -> frozenset[int]:
    """Vertices of ``X`` reachable from ``u`` by paths of length <= r with interiors outside ``X``."""
    X = X if isinstance(X, (set, frozenset)) else frozenset(X)
    dm = bfs_within_avoiding(g, u, r, X)
    return frozenset(w for w in dm.dist if w in X)


@dataclass(frozen=True)
class ProjectionProfile:
    vertex: int
    max_radius: int
    chain: tuple[frozenset[int], ...]

    def key(self) -> tuple[tuple[int, int], ...]:
        """Each projected vertex paired with the smallest radius reaching it.

        Two vertices have equal chains exactly when their keys are equal.
        """
        first: dict[int, int] = {}
        for i, level in enumerate(self.chain, start=1):
            for w in level:
                first.setdefault(w, i)
        return tuple(sorted(first.items()))


def projection_profile(g: Graph, X, u: int, max_radius: int) -> ProjectionProfile:
    X = X if isinstance(X, (set, frozenset)) else frozenset(X)
    dm = bfs_within_avoiding(g, u, max_radius, X)
    hits = [(d, w) for w, d in dm.dist.items() if w in X]
    chain = tuple(frozenset(w for d, w in hits if d <= i) for i in range(1, max_radius + 1))
    return ProjectionProfile(u, max_radius, chain)


@dataclass(frozen=True)
class DensityWitness:
    """Evidence that the closure loop ran past ``|X|`` rounds.

    ``edges``/``vertices`` are counted in the contracted graph restricted to
    the grown target set; their ratio exceeds what the threshold ``xi``
    allows for a shallow minor, so the threshold was set too low.
    """

    rounds_used: int
    xi_used: int
    x_size: int
    edges: int
    vertices: int

    @property
    def certified_density(self) -> Fraction:
        return Fraction(self.edges, self.vertices)

    @property
    def density_bound(self) -> Fraction:
        return Fraction(self.xi_used * (self.x_size + 1), 2 * self.x_size + 1)

    def holds(self) -> bool:
        return (
            self.vertices == 2 * self.x_size + 1
            and self.edges >= self.xi_used * (self.x_size + 1)
            and self.certified_density >= self.density_bound
        )


@dataclass(frozen=True)
class Closure:
    closure: frozenset[int]
    base: frozenset[int]
    rounds: int
    xi: int
    r: int
    # contracted vertex of H -> original vertices merged into it
    contracted: Mapping[int, frozenset[int]] = field(default_factory=dict)

    def size_bound(self) -> int:
        return ((self.r - 1) * self.xi + 2) * len(self.base)

    def projection_bound(self) -> int:
        return self.xi * (1 + (self.r - 1) * self.xi)


def _projection_in(adj: Mapping[int, set[int]], Y: set[int], u: int, r: int, need: int | None):
    # BFS in the contracted graph; stops early once ``need`` projected vertices are seen
    dist = {u: 0}
    parent: dict[int, int] = {}
    hits: list[int] = []
    queue = deque([u])
    while queue:
        x = queue.popleft()
        d = dist[x]
        if d == r or (x != u and x in Y):
            continue
        for w in sorted(adj[x]):
            if w in dist:
                continue
            dist[w] = d + 1
            parent[w] = x
            if w in Y:
                hits.append(w)
                if need is not None and len(hits) >= need:
                    return hits, parent
            else:
                queue.append(w)
    return hits, parent


def r_closure(g: Graph, X: Iterable[int], r: int, xi: int) -> Closure | DensityWitness:
    """Grow ``X`` by contracting high-projection vertices until all projections are small.

    While some vertex outside the current target set ``Y`` projects onto at
    least ``xi`` members of ``Y`` in the contracted graph, the lowest-id such
    vertex absorbs BFS paths to the ``xi`` lowest-id members and joins ``Y``.
    More than ``|X|`` rounds means ``xi`` underestimates the density of shallow
    minors; a :class:`DensityWitness` is returned instead of a closure.
    """
    if r < 1 or xi < 1:
        raise ValueError("r and xi must be positive")
    base = frozenset(X)
    Y: set[int] = set(base)
    adj: dict[int, set[int]] = {v: set(g.adj[v]) for v in range(g.n)}
    tau: dict[int, set[int]] = {}

    def qualifies(u: int) -> bool:
        hits, _ = _projection_in(adj, Y, u, r, xi)
        return len(hits) >= xi

    heap = [u for u in range(g.n) if u not in Y and qualifies(u)]
    heapq.heapify(heap)
    rounds = 0
    while heap:
        u = heapq.heappop(heap)
        if u not in adj or u in Y:
            continue
        hits, parent = _projection_in(adj, Y, u, r, None)
        if len(hits) < xi:
            continue
        chosen = sorted(hits)[:xi]
        merged: set[int] = {u}
        for w in chosen:
            x = parent[w]
            while x != u:
                merged.add(x)
                x = parent[x]
        new_nbrs: set[int] = set()
        for x in merged:
            new_nbrs |= adj[x]
        new_nbrs -= merged
        absorbed = set(tau.pop(u, {u}))
        for x in merged - {u}:
            absorbed |= tau.pop(x, {x})
            for y in adj[x]:
                adj[y].discard(x)
            del adj[x]
        adj[u] = new_nbrs
        for y in new_nbrs:
            adj[y].add(u)
        tau[u] = absorbed
        Y.add(u)
        rounds += 1
        if rounds > len(base):
            edges = sum(1 for a in Y for b in adj[a] if b in Y and a < b)
            return DensityWitness(rounds, xi, len(base), edges, len(Y))
        # only vertices near the contraction can change status
        near = _bfs(adj, u, r, ())[0]
        for y in near:
            if y not in Y and qualifies(y):
                heapq.heappush(heap, y)
    cl: set[int] = set(base)
    for members in tau.values():
        cl |= members
    result = Closure(
        frozenset(cl), base, rounds, xi, r, {u: frozenset(m) for u, m in tau.items()}
    )
    audit = audit_closure(g, result)
    if not all(audit.values()):
        raise RuntimeError(f"closure audit failed: {audit}")
    return result


def audit_closure(g: Graph, c: Closure) -> dict[str, bool]:
    """Direct re-check of superset, size and projection-size properties."""
    cl = c.closure
    limit = c.projection_bound()
    worst = 0
    for u in range(g.n):
        if u not in cl:
            worst = max(worst, len(projection(g, cl, u, c.r)))
    return {
        "superset": c.base <= cl,
        "size": len(cl) <= c.size_bound(),
        "projection": worst <= limit,
    }


@dataclass(frozen=True)
class ShortPathsClosure:
    vertices: frozenset[int]
    base: frozenset[int]
    closed: frozenset[int]
    # (u, v) -> vertices of the shortest X0-internally-avoiding path that was added
    paths: Mapping[tuple[int, int], tuple[int, ...]]


def short_paths_closure(
    g: Graph, X: Iterable[int], r: int, xi: int, *, closed: Iterable[int] | None = None
) -> ShortPathsClosure | DensityWitness:
    """Superset of ``X`` in which pairs at distance <= r keep their distance.

    ``closed`` overrides the r-closure step with a caller-supplied superset of
    ``X`` (used when escalation has given up on closing).
    """
    base = frozenset(X)
    if closed is None:
        c = r_closure(g, base, r, xi)
        if isinstance(c, DensityWitness):
            return c
        X0 = c.closure
    else:
        X0 = frozenset(closed)
        if not base <= X0:
            raise ContractViolation("closed set must contain X")
    out = set(X0)
    paths: dict[tuple[int, int], tuple[int, ...]] = {}
    for u in sorted(X0):
        dm = bfs_within_avoiding(g, u, r, X0 - {u})
        for v in sorted(dm.dist):
            if v > u and v in X0:
                p = tuple(dm.path_to(v))
                paths[(u, v)] = p
                out.update(p)
    return ShortPathsClosure(frozenset(out), base, X0, paths)


def distances_preserved(g: Graph, X: Iterable[int], Xp: Iterable[int], r: int) -> bool:
    """For pairs of ``X`` within distance ``r`` in ``g``, is the distance the same in ``G[Xp]``?"""
    from .graph import induced_subgraph

    X = sorted(set(X))
    sub, remap = induced_subgraph(g, Xp)
    for u in X:
        near = _bfs(g.adj, u, r, ())[0]
        inner = _bfs(sub.adj, remap[u], r, ())[0]
        for v in X:
            if v != u and v in near and inner.get(remap[v]) != near[v]:
                return False
    return True

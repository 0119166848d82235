"""Exact solvers and certificate validators for desk-scale instances.

All solvers work on bitmask encodings of closed ``r``-balls and refuse
graphs above a size cap rather than degrading to heuristics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import Graph, _bfs, multi_source_distances

__all__ = [
    "ExactResult",
    "RefusalError",
    "ball_masks",
    "exact_annotated_ds",
    "exact_connected_ds",
    "exact_ds",
    "greedy_dominator",
    "is_domination_core",
    "is_dominator",
    "is_scattered",
    "solve_motif",
    "solve_set_cover",
]

DEFAULT_CAP = 64
CORE_CAP = 22
CONNECTED_CAP = 24


class RefusalError(RuntimeError):
    """The instance is larger than the oracle's configured size cap."""


@dataclass(frozen=True)
class ExactResult:
    optimum: int | None
    witness: frozenset[int]
    nodes_explored: int


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _to_mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def ball_masks(g: Graph, r: int) -> list[int]:
    return [_to_mask(_bfs(g.adj, v, r, ())[0]) for v in range(g.n)]


def is_dominator(g: Graph, D: Iterable[int], Z: Iterable[int] | None, r: int) -> bool:
    """Whether every vertex of ``Z`` (default: all) is within distance ``r`` of ``D``."""
    D = list(D)
    if any(not 0 <= v < g.n for v in D):
        return False
    covered = multi_source_distances(g, D, r)
    targets = range(g.n) if Z is None else Z
    return all(z in covered for z in targets)


def is_scattered(g: Graph, A: Iterable[int], d: int) -> bool:
    """Whether all pairs of distinct vertices of ``A`` are at distance greater than ``d``."""
    A = set(A)
    for a in A:
        near = _bfs(g.adj, a, d, ())[0]
        if any(b != a and b in A for b in near):
            return False
    return True


class _Search:
    """Branch and bound for the smallest set of candidates covering a target mask."""

    def __init__(self, balls: Sequence[int], targets: int, candidates: int, limit: int | None):
        self.balls = balls
        self.targets = targets
        self.nodes = 0
        self.best: list[int] | None = None
        # only solutions strictly smaller than best_size are searched for
        self.best_size = (limit + 1) if limit is not None else len(balls) + 1
        self.root_candidates = candidates

    def _lower_bound(self, undom: int, cand: int) -> int:
        # targets with pairwise disjoint candidate sets need distinct dominators
        used = 0
        count = 0
        balls = self.balls
        for t in _bits(undom):
            c = balls[t] & cand
            if c & used == 0:
                used |= c
                count += 1
        return count

    def run(self) -> None:
        self._dfs(self.targets, self.root_candidates, [])

    def _dfs(self, undom: int, cand: int, chosen: list[int]) -> None:
        self.nodes += 1
        if undom == 0:
            if len(chosen) < self.best_size:
                self.best_size = len(chosen)
                self.best = list(chosen)
            return
        if len(chosen) + 1 >= self.best_size:
            return
        if len(chosen) + self._lower_bound(undom, cand) >= self.best_size:
            return
        balls = self.balls
        # branch on the target with the fewest remaining candidates, lowest id on ties
        pick_c, pick_size = 0, None
        for t in _bits(undom):
            c = balls[t] & cand
            size = c.bit_count()
            if size == 0:
                return
            if pick_size is None or size < pick_size:
                pick_c, pick_size = c, size
                if size == 1:
                    break
        options = []
        for c in _bits(pick_c):
            options.append((-(balls[c] & undom).bit_count(), c, balls[c] & undom))
        options.sort()
        kept: list[tuple[int, int]] = []
        for _, c, cover in options:
            # a candidate whose coverage is contained in a kept one's is never needed
            if any(cover & ~other == 0 for _, other in kept):
                continue
            kept.append((c, cover))
        for c, cover in kept:
            chosen.append(c)
            self._dfs(undom & ~cover, cand, chosen)
            chosen.pop()
            # solutions containing c were fully explored in the branch above
            cand &= ~(1 << c)


def _greedy_cover(balls: Sequence[int], targets: int, candidates: int) -> list[int] | None:
    undom = targets
    chosen: list[int] = []
    while undom:
        best, best_cov = -1, 0
        for c in _bits(candidates):
            cov = (balls[c] & undom).bit_count()
            if cov > best_cov:
                best, best_cov = c, cov
        if best < 0:
            return None
        chosen.append(best)
        undom &= ~balls[best]
    # drop redundant picks, highest id first
    for c in sorted(chosen, reverse=True):
        rest = 0
        for o in chosen:
            if o != c:
                rest |= balls[o]
        if targets & ~rest == 0:
            chosen.remove(c)
    return chosen


def greedy_dominator(g: Graph, Z: Iterable[int] | None, r: int) -> frozenset[int]:
    """Greedy (Z, r)-dominator with redundant picks removed; an upper bound, not an optimum."""
    targets = (1 << g.n) - 1 if Z is None else _to_mask(Z)
    return frozenset(_greedy_cover(ball_masks(g, r), targets, (1 << g.n) - 1) or ())


def _solve(
    balls: Sequence[int],
    targets: int,
    candidates: int,
    limit: int | None = None,
) -> tuple[list[int] | None, int]:
    """Minimum cover of ``targets``; with ``limit`` only covers of size <= limit are sought."""
    if targets == 0:
        return [], 1
    greedy = _greedy_cover(balls, targets, candidates)
    search = _Search(balls, targets, candidates, limit)
    if greedy is not None and len(greedy) < search.best_size:
        search.best, search.best_size = greedy, len(greedy)
    search.run()
    return search.best, search.nodes


def _guard(g: Graph, cap: int) -> None:
    if g.n > cap:
        raise RefusalError(f"graph has {g.n} vertices, above the oracle cap of {cap}")


def exact_annotated_ds(
    g: Graph, Z: Iterable[int], r: int, cap: int = DEFAULT_CAP, candidates: Iterable[int] | None = None
) -> ExactResult:
    """Smallest set r-dominating every vertex of ``Z``, optionally drawn from ``candidates`` only.

    ``optimum`` is None when the candidates cannot cover ``Z`` at all.
    """
    _guard(g, cap)
    balls = ball_masks(g, r)
    allowed = (1 << g.n) - 1 if candidates is None else _to_mask(candidates)
    best, nodes = _solve(balls, _to_mask(Z), allowed)
    if best is None:
        return ExactResult(None, frozenset(), nodes)
    return ExactResult(len(best), frozenset(best), nodes)


def exact_ds(g: Graph, r: int, cap: int = DEFAULT_CAP) -> ExactResult:
    return exact_annotated_ds(g, range(g.n), r, cap=cap)


def has_dominator_within(g: Graph, Z: Iterable[int], r: int, k: int, cap: int = DEFAULT_CAP) -> bool:
    """Decision form: is there a (Z, r)-dominator of size at most ``k``?"""
    _guard(g, cap)
    if k < 0:
        return False
    balls = ball_masks(g, r)
    best, _ = _solve(balls, _to_mask(Z), (1 << g.n) - 1, limit=k)
    return best is not None and len(best) <= k


def is_domination_core(g: Graph, Z: Iterable[int], r: int, cap: int = CORE_CAP) -> bool:
    """Whether every minimum (Z, r)-dominator r-dominates the whole graph.

    Rather than listing all minimum dominators, for each vertex ``y`` outside
    ``Z`` we ask whether some minimum-size (Z, r)-dominator avoids the ball
    of ``y``; such a dominator exists exactly when some minimum dominator
    misses ``y``.
    """
    _guard(g, cap)
    Z = set(Z)
    balls = ball_masks(g, r)
    full = (1 << g.n) - 1
    targets = _to_mask(Z)
    best, _ = _solve(balls, targets, full)
    opt = len(best)  # every vertex is a candidate, so a cover always exists
    for y in range(g.n):
        if y in Z:
            continue
        found, _ = _solve(balls, targets, full & ~balls[y], limit=opt)
        if found is not None and len(found) <= opt:
            return False
    return True


def enumerate_minimum_dominators(g: Graph, Z: Iterable[int], r: int, cap: int = CORE_CAP):
    """All minimum-size (Z, r)-dominators by plain subset enumeration."""
    _guard(g, cap)
    Z = list(Z)
    balls = ball_masks(g, r)
    targets = _to_mask(Z)
    for size in range(g.n + 1):
        found = []
        for combo in itertools.combinations(range(g.n), size):
            cov = 0
            for c in combo:
                cov |= balls[c]
            if targets & ~cov == 0:
                found.append(frozenset(combo))
        if found:
            return found
    return []


def exact_connected_ds(g: Graph, cap: int = CONNECTED_CAP) -> ExactResult:
    """Minimum connected dominating set by growing connected vertex sets level by level.

    Returns ``optimum=None`` for a disconnected graph, which has none.
    """
    _guard(g, cap)
    n = g.n
    if n == 0:
        return ExactResult(0, frozenset(), 1)
    if len(multi_source_distances(g, [0], n)) != n:
        return ExactResult(None, frozenset(), 1)
    closed = [_to_mask(g.adj[v]) | (1 << v) for v in range(n)]
    full = (1 << n) - 1
    layer = {1 << v for v in range(n)}
    nodes = 0
    while layer:
        for s in sorted(layer):
            nodes += 1
            cov = 0
            for v in _bits(s):
                cov |= closed[v]
            if cov == full:
                return ExactResult(s.bit_count(), frozenset(_bits(s)), nodes)
        nxt = set()
        for s in layer:
            frontier = 0
            for v in _bits(s):
                frontier |= closed[v]
            frontier &= ~s
            for w in _bits(frontier):
                nxt.add(s | (1 << w))
        layer = nxt
    raise AssertionError("a connected graph always has a connected dominating set")


def solve_motif(g: Graph, k: int, colors: Sequence[int]) -> frozenset[int] | None:
    """Brute-force Graph Motif: one vertex of each colour ``1..k`` inducing a connected subgraph."""
    classes: list[list[int]] = [[] for _ in range(k)]
    for v, c in enumerate(colors):
        classes[c - 1].append(v)
    if any(not c for c in classes):
        return None
    for pick in itertools.product(*classes):
        chosen = set(pick)
        start = pick[0]
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if w in chosen and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) == len(chosen):
            return frozenset(chosen)
    return None


def solve_set_cover(universe_size: int, families: Sequence[frozenset[int]], k: int) -> tuple[int, ...] | None:
    """Brute-force Set Cover: indices of at most ``k`` families covering the universe."""
    universe = set(range(universe_size))
    for size in range(0, min(k, len(families)) + 1):
        for combo in itertools.combinations(range(len(families)), size):
            covered = set()
            for i in combo:
                covered |= families[i]
            if covered >= universe:
                return combo
    return None

"""Win-win approximation for (annotated) r-domination and the apex gadget.

Each call returns either a dominator or a 2r-scattered obstruction, and every
returned certificate is re-validated before it leaves this module.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .graph import ContractViolation, Graph, GraphBuilder, _bfs
from .oracles import is_dominator, is_scattered
from .orderings import admissibility_ordering, weak_reach

__all__ = [
    "GadgetRecord",
    "Tag",
    "WinWinResult",
    "annotated_to_plain",
    "annotated_win_win",
    "build_annotation_gadget",
    "fold_gadget_dominator",
    "prune_dominator",
    "win_win",
]

log = logging.getLogger(__name__)


class Tag(str, enum.Enum):
    DOMINATOR = "dominator"
    SCATTERED = "scattered"
    RATIO_EXCEEDED = "ratio_exceeded"


@dataclass(frozen=True)
class WinWinResult:
    tag: Tag
    dominator: frozenset[int]
    scattered: frozenset[int]
    c_bound: int
    k: int
    ratio_budget: float

    @property
    def certificate(self) -> frozenset[int]:
        return self.scattered if self.tag is Tag.SCATTERED else self.dominator


@dataclass(frozen=True)
class GadgetRecord:
    apex: int
    pendant: int
    # w -> vertices of the length-r path from the apex to w, apex first
    paths: Mapping[int, tuple[int, ...]] = field(default_factory=dict)
    original_n: int = 0

    @property
    def path_ends(self) -> dict[int, int]:
        return {w: p[-1] for w, p in self.paths.items()}


def _require(ok: bool, message: str) -> None:
    # certificate checks stay on under python -O
    if not ok:
        raise RuntimeError(message)


def default_ratio_budget(c_bound: int) -> float:
    return 4.0 * c_bound * c_bound


def _decide(D, A, k: int, ratio_budget: float) -> Tag:
    if len(A) >= k + 1:
        return Tag.SCATTERED
    if len(D) <= ratio_budget * k:
        return Tag.DOMINATOR
    return Tag.RATIO_EXCEEDED


def win_win(g: Graph, r: int, k: int, ratio_budget: float | None = None) -> WinWinResult:
    """Dominating set or 2r-scattered set of size k+1, driven by a weak-reach ordering.

    Vertices are scanned in order; an undominated vertex becomes a scattered
    candidate and it, together with its weakly r-reachable set, joins the
    dominator. Candidates are then thinned greedily to a 2r-scattered set.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if k < 0:
        raise ValueError("k must be non-negative")
    if g.n == 0:
        rb = default_ratio_budget(1) if ratio_budget is None else ratio_budget
        return WinWinResult(Tag.DOMINATOR, frozenset(), frozenset(), 1, k, rb)
    sigma = admissibility_ordering(g, 2 * r)
    reach = weak_reach(g, sigma, 2 * r)
    c_bound = reach.c_bound
    rb = default_ratio_budget(c_bound) if ratio_budget is None else ratio_budget

    dominated = [False] * g.n
    D: set[int] = set()
    candidates: list[int] = []
    for v in sigma.order:
        if dominated[v]:
            continue
        candidates.append(v)
        for x in sorted({v} | reach.within(v, r)):
            if x not in D:
                D.add(x)
                for y in _bfs(g.adj, x, r, ())[0]:
                    dominated[y] = True

    blocked = [False] * g.n
    A: list[int] = []
    for a in candidates:
        if blocked[a]:
            continue
        A.append(a)
        for y in _bfs(g.adj, a, 2 * r, ())[0]:
            blocked[y] = True

    _require(is_dominator(g, D, None, r), "win-win produced an invalid dominator")
    _require(is_scattered(g, A, 2 * r), "win-win produced a non-scattered set")
    if len(D) > c_bound * c_bound * max(len(A), 1):
        log.debug("dominator/scattered ratio %d/%d above c^2=%d", len(D), len(A), c_bound**2)
    tag = _decide(D, A, k, rb)
    return WinWinResult(tag, frozenset(D), frozenset(A), c_bound, k, rb)


def build_annotation_gadget(g: Graph, Z: Iterable[int], r: int) -> tuple[Graph, GadgetRecord]:
    """Apex ``v`` joined by length-r paths to every non-target vertex and to a pendant ``v'``."""
    if r < 1:
        raise ValueError("r must be positive")
    Z = set(Z)
    if any(not 0 <= z < g.n for z in Z):
        raise ContractViolation("targets must be vertices of the graph")
    b = GraphBuilder(g)
    apex = b.add_vertex("apex")
    pendant = b.add_vertex("pendant")
    paths: dict[int, tuple[int, ...]] = {}
    for w in [w for w in range(g.n) if w not in Z] + [pendant]:
        paths[w] = tuple(b.add_path(apex, r, end=w, label=f"path{w}."))
    return b.build(), GadgetRecord(apex, pendant, paths, g.n)


def annotated_to_plain(g: Graph, Z: Iterable[int], r: int) -> tuple[Graph, GadgetRecord]:
    """Plain instance whose r-domination number is the annotated one plus one."""
    gp, rec = build_annotation_gadget(g, Z, r)
    _require(gp.n <= (r + 1) * (g.n + 1), "gadget exceeds the (r+1)(n+1) size bound")
    return gp, rec


def prune_dominator(g: Graph, D: Iterable[int], Z: Iterable[int], r: int) -> frozenset[int]:
    """Drop members of ``D`` whose removal keeps ``Z`` r-dominated, highest id first."""
    D = sorted(set(D))
    Z = set(Z)
    covers = {x: [z for z in _bfs(g.adj, x, r, ())[0] if z in Z] for x in D}
    count: dict[int, int] = {}
    for x in D:
        for z in covers[x]:
            count[z] = count.get(z, 0) + 1
    kept = set(D)
    for x in reversed(D):
        if all(count[z] >= 2 for z in covers[x]):
            kept.discard(x)
            for z in covers[x]:
                count[z] -= 1
    return frozenset(kept)


def fold_gadget_dominator(D: Iterable[int], rec: GadgetRecord) -> set[int]:
    """Replace picks on the pendant path by the apex and picks on other paths by their origin.

    The result is no larger and still r-dominates the gadget graph.
    """
    D = set(D)
    D -= set(rec.paths[rec.pendant])
    D.add(rec.apex)
    for w, path in rec.paths.items():
        if w == rec.pendant:
            continue
        on_path = D.intersection(path[1:])
        if on_path:
            D -= on_path
            D.add(w)
    return D


def annotated_win_win(
    g: Graph,
    Z: Iterable[int],
    r: int,
    k: int,
    ratio_budget: float | None = None,
) -> WinWinResult:
    """(Z, r)-dominator or a 2r-scattered subset of ``Z`` with k+1 vertices."""
    Z = frozenset(Z)
    if any(not 0 <= z < g.n for z in Z):
        raise ContractViolation("targets must be vertices of the graph")
    if k < 0:
        raise ValueError("k must be non-negative")
    if not Z:
        rb = default_ratio_budget(1) if ratio_budget is None else ratio_budget
        return WinWinResult(Tag.DOMINATOR, frozenset(), frozenset(), 1, k, rb)

    gp, rec = build_annotation_gadget(g, Z, r)
    res = win_win(gp, r, k + 1, ratio_budget)

    D = fold_gadget_dominator(res.dominator, rec)
    D_orig = {x for x in D if x < g.n}
    _require(is_dominator(gp, D, None, r), "folded gadget dominator is invalid")
    D_orig = prune_dominator(g, D_orig, Z, r)
    A = frozenset(a for a in res.scattered if a in Z)

    _require(is_dominator(g, D_orig, Z, r), "annotated dominator fails in the original graph")
    _require(is_scattered(g, A, 2 * r), "annotated scattered set fails in the original graph")
    tag = _decide(D_orig, A, k, res.ratio_budget)
    return WinWinResult(tag, frozenset(D_orig), A, res.c_bound, k, res.ratio_budget)

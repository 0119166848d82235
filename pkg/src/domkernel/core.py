"""Shrinking the set of vertices whose domination matters (the r-domination core).

The core loop starts from ``Z = V(G)`` and removes vertices that are provably
irrelevant. Removal safety is decided locally from a structure pair ``(X, S)``:
``X`` r-dominates ``Z`` and ``S`` is a subset of ``Z - X`` that is
2r-scattered in ``G - X``. Vertices of ``S`` that share their whole chain of
projections onto ``X`` are interchangeable, and all but ``|M| + 1`` of them
can be dropped, where ``M`` is their common 3r-projection. The adaptive
constants only influence how often a usable pair is found, never whether a
removal is sound.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

from .approx import Tag, annotated_win_win
from .closure import DensityWitness, projection, projection_profile, r_closure
from .graph import ContractViolation, Graph, induced_subgraph
from .oracles import is_dominator, is_scattered

__all__ = [
    "AdaptiveConstants",
    "CoreResult",
    "Infeasible",
    "NeedEscalation",
    "RemovableBatch",
    "StructurePair",
    "audit_structure",
    "extract_structure",
    "find_irrelevant",
    "reduce_core",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdaptiveConstants:
    """Runtime stand-ins for the grad-dependent constants.

    ``xi`` is the closure threshold, ``c0`` the required ratio between the
    scattered set and ``X``, ``round_cap`` bounds extraction rounds.
    ``ratio_budget=None`` means ``4 * cBound**2`` of the ordering in use.
    """

    xi: int = 4
    delta_cl_cap: int | None = None
    c0: float = 4
    ratio_budget: float | None = None
    round_cap: int = 8
    escalation_factor: int = 2
    max_escalations: int = 6
    batch: bool = False
    opportunistic: bool = True

    def __post_init__(self):
        if self.xi < 1 or self.c0 < 1 or self.round_cap < 1 or self.escalation_factor < 2:
            raise ValueError("adaptive constants must be at least 1 (escalation factor at least 2)")
        if self.max_escalations < 0:
            raise ValueError("max_escalations must be non-negative")
        if self.ratio_budget is not None and self.ratio_budget < 1:
            raise ValueError("ratio_budget must be at least 1")

    def delta_cl(self, r: int) -> int:
        """Bound on 3r-projections onto a 3r-closed set."""
        if self.delta_cl_cap is not None:
            return self.delta_cl_cap
        return self.xi * (1 + (3 * r - 1) * self.xi)

    def escalated(self, reason: str) -> "AdaptiveConstants":
        f = self.escalation_factor
        if reason == "round_cap":
            return replace(self, round_cap=self.round_cap * f)
        ratio = None if self.ratio_budget is None else self.ratio_budget * f
        return replace(self, xi=self.xi * f, ratio_budget=ratio)


@dataclass(frozen=True)
class StructurePair:
    X: frozenset[int]
    S: frozenset[int]
    trace: tuple[dict, ...] = ()
    accepted: bool = True


@dataclass(frozen=True)
class Infeasible:
    """ds_r(G) > k, certified by a 2r-scattered subset of the targets of size > k."""

    certificate: frozenset[int]


@dataclass(frozen=True)
class NeedEscalation:
    reason: str
    witness: DensityWitness | None = None
    trace: tuple[dict, ...] = ()
    # valid but unaccepted (X, S) pairs seen along the way
    fallback: tuple[StructurePair, ...] = ()


@dataclass(frozen=True)
class RemovableBatch:
    kappa: frozenset[int]
    projection: frozenset[int]
    removals: frozenset[int]


@dataclass(frozen=True)
class CoreResult:
    tag: str  # "core" | "infeasible" | "escalated"
    Z: frozenset[int]
    removed_count: int
    reason: str = ""
    certificate: frozenset[int] = frozenset()
    escalation_log: tuple[dict, ...] = ()
    iterations: tuple[dict, ...] = ()
    constants: AdaptiveConstants = field(default_factory=AdaptiveConstants)


def audit_structure(g: Graph, Z, pair: StructurePair, r: int, consts: AdaptiveConstants | None = None) -> dict[str, bool]:
    """Check the invariants a structure pair must satisfy.

    The dominator/disjoint/scattered checks are what removal safety rests
    on; ``ratio`` and ``projection`` only hold for accepted pairs.
    """
    X, S = pair.X, pair.S
    Z = set(Z)
    rest, remap = induced_subgraph(g, set(range(g.n)) - X)
    out = {
        "dominator": is_dominator(g, X, Z, r),
        "disjoint": not (S & X) and S <= Z,
        "scattered": is_scattered(rest, [remap[s] for s in S], 2 * r),
    }
    if consts is not None and pair.accepted:
        out["ratio"] = len(S) > consts.c0 * len(X) or not Z
        limit = consts.xi * (1 + (3 * r - 1) * consts.xi)
        out["projection"] = all(
            len(projection(g, X, u, 3 * r)) <= limit for u in range(g.n) if u not in X
        )
    return out


def _sub_win_win(g: Graph, X: frozenset[int], Z: frozenset[int], r: int, budget: int, ratio_budget):
    keep = [v for v in range(g.n) if v not in X]
    sub, remap = induced_subgraph(g, keep)
    back = {new: old for old, new in remap.items()}
    res = annotated_win_win(sub, [remap[z] for z in Z if z not in X], r, budget, ratio_budget)
    return res, frozenset(back[d] for d in res.dominator), frozenset(back[a] for a in res.scattered)


def extract_structure(
    g: Graph, Z: Iterable[int], r: int, k: int, consts: AdaptiveConstants
) -> StructurePair | Infeasible | NeedEscalation:
    """Alternate dominator extraction and 3r-closure until a large scattered set appears."""
    Z = frozenset(Z)
    if any(not 0 <= z < g.n for z in Z):
        raise ContractViolation("targets must be vertices of the graph")
    if not Z:
        return StructurePair(frozenset(), frozenset(), ())
    first = annotated_win_win(g, Z, r, k, consts.ratio_budget)
    if first.tag is Tag.SCATTERED:
        return Infeasible(first.scattered)
    Y = first.dominator
    trace: list[dict] = []
    fallback: list[StructurePair] = []
    for i in range(1, consts.round_cap + 1):
        cl = r_closure(g, Y, 3 * r, consts.xi)
        if isinstance(cl, DensityWitness):
            return NeedEscalation("density", cl, tuple(trace), tuple(fallback))
        X = cl.closure
        budget = int(consts.c0 * len(X))
        res, D, A = _sub_win_win(g, X, Z, r, budget, consts.ratio_budget)
        trace.append({"round": i, "Y": len(Y), "X": len(X), "D": len(D), "S": len(A), "tag": res.tag.value})
        if res.tag is Tag.SCATTERED:
            return StructurePair(X, A, tuple(trace))
        if A:
            fallback.append(StructurePair(X, A, tuple(trace), accepted=False))
        if not (Z - X):
            return NeedEscalation("exhausted", None, tuple(trace), tuple(fallback))
        Y = X | D
    return NeedEscalation("round_cap", None, tuple(trace), tuple(fallback))


def find_irrelevant(g: Graph, Z, X, S, r: int, *, batch: bool = False) -> RemovableBatch | None:
    """A class of interchangeable scattered vertices and the members safe to drop.

    ``S`` is partitioned by the chain of projections onto ``X`` up to radius
    3r. A class ``kappa`` with common 3r-projection ``M`` stays sound as
    long as at least ``|M| + 1`` classmates survive, so a class with
    ``|kappa| >= |M| + 2`` yields one removal (or ``|kappa| - |M| - 1`` in
    batch mode). Returns ``None`` when no class is large enough.
    """
    X = frozenset(X)
    classes: dict[tuple, list[int]] = {}
    proj: dict[tuple, frozenset[int]] = {}
    for s in sorted(S):
        prof = projection_profile(g, X, s, 3 * r)
        key = prof.key()
        classes.setdefault(key, []).append(s)
        proj[key] = prof.chain[-1]
    best = None
    for key, members in classes.items():
        slack = len(members) - len(proj[key]) - 1
        if slack < 1:
            continue
        rank = (-len(members), members[0])
        if best is None or rank < best[0]:
            best = (rank, key, slack)
    if best is None:
        return None
    _, key, slack = best
    members = classes[key]
    count = slack if batch else 1
    removals = frozenset(members[-count:])
    return RemovableBatch(frozenset(members), proj[key], removals)


def _try_fallback(g, Z, pairs, r, batch):
    for pair in sorted(pairs, key=lambda p: -len(p.S)):
        found = find_irrelevant(g, Z, pair.X, pair.S, r, batch=batch)
        if found is not None:
            return pair, found
    return None


def reduce_core(
    g: Graph,
    r: int,
    k: int,
    consts: AdaptiveConstants | None = None,
    *,
    on_removal: Callable[[frozenset[int], RemovableBatch], None] | None = None,
) -> CoreResult:
    """Compute an r-domination core, or certify ds_r(G) > k.

    Correctness does not depend on the constants: every removal is justified
    by a validated structure pair, and escalation only happens when no such
    pair is available.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if r < 1:
        raise ValueError("r must be positive")
    consts = consts or AdaptiveConstants()
    batch = consts.batch or g.n > 200
    Z = frozenset(range(g.n))
    removed = 0
    escalations: list[dict] = []
    iterations: list[dict] = []
    while True:
        if len(Z) <= k:
            return CoreResult("core", Z, removed, "small", escalation_log=tuple(escalations),
                              iterations=tuple(iterations), constants=consts)
        out = extract_structure(g, Z, r, k, consts)
        if isinstance(out, Infeasible):
            cert = out.certificate
            if not (is_scattered(g, cert, 2 * r) and len(cert) > k):
                raise RuntimeError("infeasibility certificate failed validation")
            return CoreResult("infeasible", Z, removed, "scattered", cert, tuple(escalations),
                              tuple(iterations), consts)
        pair = out if isinstance(out, StructurePair) else None
        found = None
        if pair is not None:
            found = find_irrelevant(g, Z, pair.X, pair.S, r, batch=batch)
            if found is None:
                return CoreResult("core", Z, removed, "none_found", escalation_log=tuple(escalations),
                                  iterations=tuple(iterations), constants=consts)
        elif consts.opportunistic:
            hit = _try_fallback(g, Z, out.fallback, r, batch)
            if hit is not None:
                pair, found = hit
        if found is None:
            if len(escalations) >= consts.max_escalations:
                return CoreResult("escalated", Z, removed, out.reason, escalation_log=tuple(escalations),
                                  iterations=tuple(iterations), constants=consts)
            consts = consts.escalated(out.reason)
            escalations.append({"reason": out.reason, "xi": consts.xi, "round_cap": consts.round_cap})
            log.debug("escalating constants: %s", escalations[-1])
            continue
        audit = audit_structure(g, Z, pair, r)
        if not all(audit.values()):
            raise RuntimeError(f"structure pair failed audit: {audit}")
        Z = Z - found.removals
        removed += len(found.removals)
        iterations.append({
            "Z": len(Z), "X": len(pair.X), "S": len(pair.S), "class": len(found.kappa),
            "projection": len(found.projection), "removed": len(found.removals),
            "accepted": pair.accepted,
        })
        if on_removal is not None:
            on_removal(Z, found)

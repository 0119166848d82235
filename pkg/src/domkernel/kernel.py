"""Dominator reduction and the three kernel outputs.

* ``kernelize_r1``: induced subgraph ``G[Y]`` with budget ``k`` (r = 1 only).
* ``kernelize_annotated``: ``G[W]`` with target set ``Z`` and budget ``k``.
* ``kernelize_plain``: the annotated kernel turned into a plain instance by
  the apex gadget, budget ``k + 1``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

from .approx import GadgetRecord, annotated_to_plain, fold_gadget_dominator
from .closure import DensityWitness, ShortPathsClosure, projection_profile, r_closure, short_paths_closure
from .core import AdaptiveConstants, CoreResult, reduce_core
from .graph import Graph, induced_subgraph
from .oracles import is_dominator

__all__ = [
    "DominatorReduction",
    "KernelOutput",
    "kernelize",
    "kernelize_all",
    "kernelize_annotated",
    "kernelize_plain",
    "kernelize_r1",
    "lift_solution",
    "reduce_dominators",
]

log = logging.getLogger(__name__)

KINDS = ("induced_r1", "annotated_w", "plain_gadget", "infeasible")


@dataclass(frozen=True)
class DominatorReduction:
    Y: frozenset[int]
    closed: frozenset[int]
    representatives: dict[int, tuple[int, ...]]  # representative -> its class


@dataclass(frozen=True)
class KernelOutput:
    kind: str
    graph: Graph
    targets: frozenset[int]
    k_prime: int
    id_map: tuple[int | None, ...]
    trace: dict = field(default_factory=dict)
    certificate: frozenset[int] = frozenset()
    r: int = 1
    gadget: GadgetRecord | None = None

    @property
    def infeasible(self) -> bool:
        return self.kind == "infeasible"


def reduce_dominators(g: Graph, Z: Iterable[int], r: int, xi: int) -> DominatorReduction | DensityWitness:
    """Keep the closed core plus one representative per class of projection chains.

    Vertices outside the closed core with identical projection chains (radii
    1..r) r-dominate exactly the same core vertices, so one of each suffices.
    """
    c = r_closure(g, Z, r, xi)
    if isinstance(c, DensityWitness):
        return c
    return _representatives(g, c.closure, r)


def _representatives(g: Graph, closed: frozenset[int], r: int) -> DominatorReduction:
    classes: dict[tuple, list[int]] = {}
    for v in range(g.n):
        if v not in closed:
            classes.setdefault(projection_profile(g, closed, v, r).key(), []).append(v)
    reps = {members[0]: tuple(members) for members in classes.values()}
    return DominatorReduction(closed | frozenset(reps), closed, reps)


def _reduce_dominators_escalating(g: Graph, Z, r: int, consts: AdaptiveConstants, trace: dict):
    xi = consts.xi
    for _ in range(consts.max_escalations + 1):
        out = reduce_dominators(g, Z, r, xi)
        if not isinstance(out, DensityWitness):
            trace["dominator_xi"] = xi
            return out
        xi *= consts.escalation_factor
    # the closure only controls size; representatives over the bare core stay correct
    trace["dominator_xi"] = None
    return _representatives(g, frozenset(Z), r)


def _short_paths_escalating(g: Graph, Y, r: int, consts: AdaptiveConstants, trace: dict) -> ShortPathsClosure:
    xi = consts.xi
    for _ in range(consts.max_escalations + 1):
        out = short_paths_closure(g, Y, r, xi)
        if not isinstance(out, DensityWitness):
            trace["short_paths_xi"] = xi
            return out
        xi *= consts.escalation_factor
    trace["short_paths_xi"] = None
    return short_paths_closure(g, Y, r, xi, closed=Y)


def _core_trace(core: CoreResult) -> dict:
    return {
        "core_tag": core.tag,
        "core_reason": core.reason,
        "core_size": len(core.Z),
        "removed": core.removed_count,
        "escalations": list(core.escalation_log),
        "iterations": list(core.iterations),
    }


def _infeasible(g: Graph, core: CoreResult, r: int, k: int) -> KernelOutput:
    return KernelOutput("infeasible", Graph.empty(0), frozenset(), k, (), _core_trace(core), core.certificate, r)


def _induced(g: Graph, keep, targets) -> tuple[Graph, frozenset[int], tuple[int | None, ...]]:
    sub, remap = induced_subgraph(g, keep)
    id_map = tuple(sorted(remap))
    return sub, frozenset(remap[z] for z in targets), id_map


@dataclass
class _Stages:
    core: CoreResult
    reduction: DominatorReduction | None = None
    shortcut: ShortPathsClosure | None = None
    trace: dict = field(default_factory=dict)


def _stages(g: Graph, r: int, k: int, consts: AdaptiveConstants | None, want_w: bool) -> _Stages:
    consts = consts or AdaptiveConstants()
    core = reduce_core(g, r, k, consts)
    st = _Stages(core, trace=_core_trace(core))
    if core.tag == "infeasible":
        return st
    st.reduction = _reduce_dominators_escalating(g, core.Z, r, core.constants, st.trace)
    st.trace["Y"] = len(st.reduction.Y)
    st.trace["classes"] = len(st.reduction.representatives)
    if want_w:
        st.shortcut = _short_paths_escalating(g, st.reduction.Y, r, core.constants, st.trace)
        st.trace["W"] = len(st.shortcut.vertices)
    return st


def _r1_output(g: Graph, st: _Stages, k: int) -> KernelOutput:
    if st.core.tag == "infeasible":
        return _infeasible(g, st.core, 1, k)
    sub, _, id_map = _induced(g, st.reduction.Y, ())
    return KernelOutput("induced_r1", sub, frozenset(), k, id_map, dict(st.trace), r=1)


def _annotated_output(g: Graph, st: _Stages, r: int, k: int) -> KernelOutput:
    if st.core.tag == "infeasible":
        return _infeasible(g, st.core, r, k)
    sub, targets, id_map = _induced(g, st.shortcut.vertices, st.core.Z)
    return KernelOutput("annotated_w", sub, targets, k, id_map, dict(st.trace), r=r)


def _plain_output(g: Graph, annotated: KernelOutput, r: int, k: int) -> KernelOutput:
    if annotated.infeasible:
        return annotated
    gp, rec = annotated_to_plain(annotated.graph, annotated.targets, r)
    id_map = annotated.id_map + (None,) * (gp.n - annotated.graph.n)
    trace = dict(annotated.trace, apex=rec.apex, pendant=rec.pendant)
    return KernelOutput("plain_gadget", gp, frozenset(), k + 1, id_map, trace, r=r, gadget=rec)


def kernelize_r1(g: Graph, k: int, consts: AdaptiveConstants | None = None) -> KernelOutput:
    """Induced-subgraph kernel for Dominating Set: ds(G) <= k iff ds(G[Y]) <= k."""
    return _r1_output(g, _stages(g, 1, k, consts, want_w=False), k)


def kernelize_annotated(g: Graph, r: int, k: int, consts: AdaptiveConstants | None = None) -> KernelOutput:
    """ds_r(G) <= k iff ds_r(G[W], Z) <= k."""
    if r < 1:
        raise ValueError("r must be positive")
    return _annotated_output(g, _stages(g, r, k, consts, want_w=True), r, k)


def kernelize_plain(g: Graph, r: int, k: int, consts: AdaptiveConstants | None = None) -> KernelOutput:
    """ds_r(G) <= k iff ds_r(G') <= k + 1."""
    return _plain_output(g, kernelize_annotated(g, r, k, consts), r, k)


def kernelize_all(g: Graph, r: int, k: int, consts: AdaptiveConstants | None = None) -> dict[str, KernelOutput]:
    """All applicable kernels from one shared core computation."""
    st = _stages(g, r, k, consts, want_w=True)
    out = {}
    if r == 1:
        out["r1"] = _r1_output(g, st, k)
    out["annotated"] = _annotated_output(g, st, r, k)
    out["plain"] = _plain_output(g, out["annotated"], r, k)
    return out


def kernelize(g: Graph, r: int, k: int, mode: str, consts: AdaptiveConstants | None = None) -> KernelOutput:
    if mode == "r1":
        if r != 1:
            raise ValueError("mode r1 requires r = 1")
        return kernelize_r1(g, k, consts)
    if mode == "annotated":
        return kernelize_annotated(g, r, k, consts)
    if mode == "plain":
        return kernelize_plain(g, r, k, consts)
    raise ValueError(f"unknown kernel mode {mode!r}")


def lift_solution(g: Graph, out: KernelOutput, D: Iterable[int]) -> frozenset[int]:
    """Map a minimum-size kernel solution back to an r-dominating set of ``g``.

    Gadget picks are folded onto their path origins and the apex is dropped,
    so a plain-kernel solution of size s lifts to at most s - 1 vertices. The
    guarantee covers minimum kernel solutions; anything that fails to
    dominate ``g`` after lifting is rejected.
    """
    if out.infeasible:
        raise ValueError("an infeasible kernel has no solutions")
    D = set(D)
    if out.gadget is not None:
        D = {v for v in fold_gadget_dominator(D, out.gadget) if v < out.gadget.original_n}
    lifted = frozenset(out.id_map[v] for v in D if out.id_map[v] is not None)
    if not is_dominator(g, lifted, None, out.r):
        raise ValueError("lifted set does not r-dominate the input graph")
    return lifted

"""Oracle-backed equivalence checks shared by the ``verify`` command and the test suite."""

from __future__ import annotations

from dataclasses import dataclass

from . import generators as gen
from .core import AdaptiveConstants, reduce_core
from .graph import Graph
from .kernel import KernelOutput, kernelize_all
from .oracles import exact_annotated_ds, exact_ds, has_dominator_within, is_domination_core, is_scattered

__all__ = ["CheckRow", "check_core_soundness", "check_kernels", "kernel_verdict", "sweep_instances"]

# the plain kernel grows by a factor r + 1, so its oracle gets more room
KERNEL_CAP = 200


@dataclass(frozen=True)
class CheckRow:
    instance: str
    r: int
    k: int
    mode: str
    expected: bool
    got: bool
    size: int

    @property
    def ok(self) -> bool:
        return self.expected == self.got

    def as_dict(self) -> dict:
        return {
            "instance": self.instance, "r": self.r, "k": self.k, "mode": self.mode,
            "expected": self.expected, "got": self.got, "size": self.size, "pass": self.ok,
        }


def sweep_instances(max_n: int = 40, seeds: tuple[int, ...] = (1, 2, 3)) -> list[tuple[str, Graph]]:
    """The standard small families, each with at most ``max_n`` vertices."""
    out: list[tuple[str, Graph]] = []
    for n in (1, 2, 3, 5, 8, 13, 21, 30, 40):
        out.append((f"path{n}", gen.path(n)))
    for n in (3, 4, 5, 7, 10, 16, 25, 40):
        out.append((f"cycle{n}", gen.cycle(n)))
    for rows in range(2, 6):
        for cols in range(rows, 6):
            out.append((f"grid{rows}x{cols}", gen.grid(rows, cols)))
    for n in (4, 5):
        for t in (1, 2):
            out.append((f"subclique{n}t{t}", gen.subdivided_clique(n, t)))
    for n in (10, 16, 22, 30, 40):
        for s in seeds:
            out.append((f"randdeg{n}d3s{s}", gen.random_bounded_degree(n, 3, s)))
    out.append(("star8", gen.star(8)))
    out.append(("caterpillar4x3", gen.caterpillar(4, 3)))
    return [(name, g) for name, g in out if g.n <= max_n]


def kernel_verdict(out: KernelOutput, cap: int = KERNEL_CAP) -> bool:
    """Is the kernel a yes-instance at its own budget?"""
    if out.infeasible:
        return False
    targets = out.targets if out.kind == "annotated_w" else range(out.graph.n)
    return has_dominator_within(out.graph, targets, out.r, out.k_prime, cap=cap)


def check_kernels(name: str, g: Graph, r: int, ks, consts: AdaptiveConstants | None = None) -> list[CheckRow]:
    ds = exact_ds(g, r).optimum
    rows = []
    for k in ks:
        expected = ds <= k
        for mode, out in kernelize_all(g, r, k, consts).items():
            if out.infeasible and not (is_scattered(g, out.certificate, 2 * r) and len(out.certificate) > k):
                got = not expected  # a bad certificate always counts as a failure
            else:
                got = kernel_verdict(out)
            rows.append(CheckRow(name, r, k, mode, expected, got, out.graph.n))
    return rows


def check_core_soundness(g: Graph, r: int, k: int, consts: AdaptiveConstants | None = None) -> list[dict]:
    """Re-check the core property and ds preservation after every removal batch."""
    ds = exact_ds(g, r).optimum
    records: list[dict] = []

    def on_removal(Z, batch) -> None:
        records.append({
            "Z": len(Z),
            "removed": len(batch.removals),
            "core": is_domination_core(g, Z, r),
            "ds_kept": exact_annotated_ds(g, Z, r).optimum == ds,
        })

    res = reduce_core(g, r, k, consts, on_removal=on_removal)
    records.append({
        "Z": len(res.Z),
        "removed": 0,
        "core": is_domination_core(g, res.Z, r),
        "ds_kept": exact_annotated_ds(g, res.Z, r).optimum == ds,
    })
    return records

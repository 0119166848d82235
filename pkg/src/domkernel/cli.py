"""Command-line front end. Every command prints one JSON document (schema "1")."""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import generators as gen
from .approx import Tag, annotated_win_win
from .closure import DensityWitness, audit_closure, r_closure
from .core import AdaptiveConstants, reduce_core
from .graph import ContractViolation, Graph, GraphFormatError, load_edge_list, to_edge_list
from .kernel import kernelize
from .oracles import (
    CONNECTED_CAP,
    CORE_CAP,
    DEFAULT_CAP,
    RefusalError,
    exact_annotated_ds,
    exact_connected_ds,
    exact_ds,
    greedy_dominator,
    is_dominator,
    is_scattered,
)
from .orderings import admissibility_ordering, degeneracy_ordering, weak_reach
from .verify import check_core_soundness, check_kernels, sweep_instances

log = logging.getLogger("domkernel")

SCHEMA = "1"
EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_REFUSAL, EXIT_VERIFY = 0, 1, 2, 3, 4

FAMILIES = ("grid", "path", "cycle", "subclique", "randdeg", "motif2cds", "sc2rds")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _emit(doc: dict, out: str | None = None) -> None:
    text = json.dumps(dict(doc, schema=SCHEMA), sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_graph(path: str) -> Graph:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return load_edge_list(text)


def _read_set(path: str | None) -> list[int] | None:
    if path is None:
        return None
    out = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0]
        for tok in line.split():
            if not tok.isdigit():
                raise GraphFormatError(f"bad vertex id {tok!r}", lineno)
            out.append(int(tok))
    return sorted(set(out))


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("KERNEL_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"KERNEL_SEED must be an integer, got {env!r}") from None


def _params(text: str | None) -> dict[str, int]:
    out: dict[str, int] = {}
    if not text:
        return out
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep or not value.strip().lstrip("-").isdigit():
            raise UsageError(f"bad parameter {item!r}; expected key=int")
        out[key.strip()] = int(value)
    return out


def _constants(args) -> AdaptiveConstants:
    base = AdaptiveConstants()
    try:
        return AdaptiveConstants(
            xi=args.xi if args.xi is not None else base.xi,
            c0=args.c0 if args.c0 is not None else base.c0,
            round_cap=args.round_cap if args.round_cap is not None else base.round_cap,
            ratio_budget=args.ratio_budget,
            max_escalations=args.max_escalations if args.max_escalations is not None else base.max_escalations,
            batch=args.batch,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _check_rk(r: int, k: int | None = None) -> None:
    if r < 1:
        raise UsageError("--r must be at least 1")
    if k is not None and k < 0:
        raise UsageError("--k must be non-negative")


# ---- generation ----


def _random_motif(rng: random.Random, n: int, k: int) -> gen.MotifInstance:
    # random tree of maximum degree 3 with a random surjective colouring
    edges = []
    deg = [0] * n
    for v in range(1, n):
        parents = [u for u in range(v) if deg[u] < 3]
        u = rng.choice(parents)
        edges.append((u, v))
        deg[u] += 1
        deg[v] += 1
    colors = list(range(1, k + 1)) + [rng.randint(1, k) for _ in range(n - k)]
    rng.shuffle(colors)
    return gen.MotifInstance(Graph.from_edges(n, edges), k, tuple(colors))


def _random_setcover(rng: random.Random, u: int, f: int, k: int) -> gen.SetCoverInstance:
    fams = [[e for e in range(u) if rng.random() < 0.5] for _ in range(f)]
    return gen.SetCoverInstance.of(u, fams, k)


def build_family(family: str, p: dict[str, int], seed: int) -> tuple[Graph, dict]:
    """Instantiate a named family; returns the graph and extra metadata."""
    meta: dict = {}
    try:
        if family == "grid":
            g = gen.grid(p.get("rows", 4), p.get("cols", p.get("rows", 4)))
        elif family == "path":
            g = gen.path(p.get("n", 10))
        elif family == "cycle":
            g = gen.cycle(p.get("n", 10))
        elif family == "subclique":
            g = gen.subdivided_clique(p.get("n", 4), p.get("t", 1))
        elif family == "randdeg":
            g = gen.random_bounded_degree(p.get("n", 20), p.get("d", 3), seed)
        elif family == "motif2cds":
            n, k = p.get("n", 6), p.get("k", 3)
            if not 1 <= k <= n:
                raise ValueError("motif2cds needs 1 <= k <= n")
            inst = _random_motif(random.Random(seed), n, k)
            g, budget = gen.motif_to_cds(inst)
            meta = {"budget": budget, "colors": list(inst.colors), "tree": to_edge_list(inst.graph)}
        elif family == "sc2rds":
            inst = _random_setcover(random.Random(seed), p.get("u", 4), p.get("f", 3), p.get("k", 2))
            g, r, budget = gen.setcover_to_rds(inst, p.get("r0", 1))
            meta = {"budget": budget, "r": r, "families": [sorted(f) for f in inst.families]}
        else:
            raise UsageError(f"unknown family {family!r}")
    except (ValueError, ContractViolation) as exc:
        raise UsageError(str(exc)) from None
    return g, meta


def cmd_gen(args) -> int:
    seed = _seed(args)
    g, meta = build_family(args.family, _params(args.params), seed)
    text = to_edge_list(g)
    if args.out:
        Path(args.out).write_text(text)
    _emit({"family": args.family, "seed": seed, "n": g.n, "m": g.m, "hash": gen.graph_hash(g),
           "out": args.out, "edges": None if args.out else text, **meta})
    return EXIT_OK


# ---- algorithms ----


def cmd_approx(args) -> int:
    g = _read_graph(args.graph)
    _check_rk(args.r, args.k)
    Z = _read_set(args.target_file)
    Z = list(range(g.n)) if Z is None else Z
    res = annotated_win_win(g, Z, args.r, args.k, args.ratio_budget)
    if res.tag is Tag.SCATTERED:
        ok = is_scattered(g, res.scattered, 2 * args.r) and len(res.scattered) > args.k
    else:
        ok = is_dominator(g, res.dominator, Z, args.r)
    _emit({"tag": res.tag.value, "size": len(res.certificate), "certificate": sorted(res.certificate),
           "certificateOk": ok, "cBound": res.c_bound})
    return EXIT_INFEASIBLE if res.tag is Tag.SCATTERED else EXIT_OK


def cmd_closure(args) -> int:
    g = _read_graph(args.graph)
    _check_rk(args.r)
    X = _read_set(args.set) or []
    c = r_closure(g, X, args.r, args.xi)
    if isinstance(c, DensityWitness):
        _emit({"closure": None, "witness": {"rounds": c.rounds_used, "xi": c.xi_used, "x": c.x_size,
               "edges": c.edges, "vertices": c.vertices, "holds": c.holds()}})
        return EXIT_OK
    _emit({"closure": sorted(c.closure), "rounds": c.rounds, "audit": audit_closure(g, c),
           "sizeBound": c.size_bound(), "projectionBound": c.projection_bound()})
    return EXIT_OK


def cmd_core(args) -> int:
    g = _read_graph(args.graph)
    _check_rk(args.r, args.k)
    res = reduce_core(g, args.r, args.k, _constants(args))
    hist: dict[str, int] = {}
    for it in res.iterations:
        hist[str(it["class"])] = hist.get(str(it["class"]), 0) + 1
    _emit({"tag": res.tag, "reason": res.reason, "Z": sorted(res.Z), "removed": res.removed_count,
           "certificate": sorted(res.certificate), "iterations": list(res.iterations),
           "escalations": list(res.escalation_log), "classHistogram": hist})
    return EXIT_INFEASIBLE if res.tag == "infeasible" else EXIT_OK


def cmd_kernelize(args) -> int:
    g = _read_graph(args.graph)
    _check_rk(args.r, args.k)
    if args.mode == "r1" and args.r != 1:
        raise UsageError("--mode r1 requires --r 1")
    out = kernelize(g, args.r, args.k, args.mode, _constants(args))
    doc = {
        "kind": out.kind, "n": out.graph.n, "m": out.graph.m, "edges": to_edge_list(out.graph),
        "targets": sorted(out.targets), "kPrime": out.k_prime, "idMap": list(out.id_map),
        "trace": out.trace, "certificate": sorted(out.certificate), "r": out.r,
    }
    _emit(doc, args.out)
    if args.out:
        _emit({"kind": out.kind, "n": out.graph.n, "kPrime": out.k_prime, "out": args.out})
    return EXIT_INFEASIBLE if out.infeasible else EXIT_OK


def cmd_solve(args) -> int:
    g = _read_graph(args.graph)
    _check_rk(args.r)
    if args.connected:
        if args.r != 1 or args.targets:
            raise UsageError("--connected supports only r = 1 without targets")
        res = exact_connected_ds(g, cap=args.cap or CONNECTED_CAP)
    else:
        Z = _read_set(args.targets)
        res = exact_annotated_ds(g, range(g.n) if Z is None else Z, args.r, cap=args.cap or DEFAULT_CAP)
    _emit({"optimum": res.optimum, "witness": sorted(res.witness), "nodes": res.nodes_explored})
    return EXIT_OK


def _verify_one(job):
    name, g, r, consts = job
    ds = exact_ds(g, r).optimum
    rows = [row.as_dict() for row in check_kernels(name, g, r, range(ds + 2), consts)]
    if g.n > CORE_CAP:
        return rows  # the core oracle enumerates minimum dominators; keep it to small graphs
    for rec in check_core_soundness(g, r, ds, consts):
        rows.append({"instance": name, "r": r, "k": ds, "mode": "core", "size": rec["Z"],
                     "pass": rec["core"] and rec["ds_kept"]})
    return rows


def _pool_map(fn, jobs, workers: int):
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))  # map keeps submission order


def cmd_verify(args) -> int:
    consts = _constants(args)
    radii = [int(x) for x in args.radii.split(",")]
    for r in radii:
        _check_rk(r)
    if args.graph:
        instances = [(Path(args.graph).name, _read_graph(args.graph))]
    else:
        instances = sweep_instances(args.max_n)
    jobs = [(name, g, r, consts) for name, g in instances for r in radii]
    rows = [row for chunk in _pool_map(_verify_one, jobs, args.jobs) for row in chunk]
    failed = sum(1 for row in rows if not row["pass"])
    _emit({"checks": len(rows), "failed": failed, "matrix": rows})
    return EXIT_VERIFY if failed else EXIT_OK


def _bench_one(job):
    name, g, r, k, consts, timing = job
    if k is None:
        k = len(greedy_dominator(g, None, r))
    t0 = time.perf_counter()
    out = kernelize(g, r, k, "annotated", consts)
    millis = round((time.perf_counter() - t0) * 1000)
    tr = out.trace
    row = {"instance": name, "n": g.n, "k": k, "kind": out.kind, "Z": tr.get("core_size"),
           "Y": tr.get("Y"), "W": tr.get("W"), "escalations": len(tr.get("escalations", []))}
    if timing:
        row["millis"] = millis
    return row


def cmd_bench(args) -> int:
    _check_rk(args.r, args.k)
    consts = _constants(args)
    seed = _seed(args)
    sizes = [int(x) for x in args.sizes.split(",")]
    jobs = []
    for s in sizes:
        key = {"grid": "rows", "subclique": "n"}.get(args.family, "n")
        g, _ = build_family(args.family, {**_params(args.params), key: s}, seed)
        jobs.append((f"{args.family}{s}", g, args.r, args.k, consts, args.timing))
    rows = _pool_map(_bench_one, jobs, args.jobs)
    _emit({"family": args.family, "r": args.r, "seed": seed, "rows": rows})
    return EXIT_OK


def cmd_sparsity(args) -> int:
    g = _read_graph(args.graph)
    _, degeneracy = degeneracy_ordering(g)
    rows = []
    for m in range(1, args.max_m + 1):
        sigma = admissibility_ordering(g, m)
        rows.append({"m": m, "cBound": weak_reach(g, sigma, m).c_bound})
    _emit({"n": g.n, "m": g.m, "degeneracy": degeneracy, "rows": rows})
    return EXIT_OK


# ---- parser ----


def _add_constants(p: argparse.ArgumentParser) -> None:
    p.add_argument("--xi", type=int)
    p.add_argument("--c0", type=float)
    p.add_argument("--round-cap", type=int)
    p.add_argument("--ratio-budget", type=float)
    p.add_argument("--max-escalations", type=int)
    p.add_argument("--batch", action="store_true", help="remove whole slack of a class at once")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="domkernel", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate an instance family")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--params", help="comma-separated key=int pairs, e.g. rows=4,cols=5")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("approx", help="win-win approximation")
    p.add_argument("graph")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--target-file")
    p.add_argument("--ratio-budget", type=float)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("closure", help="r-closure of a vertex set")
    p.add_argument("graph")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--xi", type=int, required=True)
    p.add_argument("--set", required=True)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("core", help="r-domination core")
    p.add_argument("graph")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    _add_constants(p)
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("kernelize", help="compute a kernel")
    p.add_argument("graph")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=("r1", "annotated", "plain"), default="annotated")
    p.add_argument("--out")
    _add_constants(p)
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("solve", help="exact solver for small graphs")
    p.add_argument("graph")
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--targets")
    p.add_argument("--connected", action="store_true")
    p.add_argument("--cap", type=int)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check kernel equivalence against the exact oracles")
    p.add_argument("--graph")
    p.add_argument("--max-n", type=int, default=22)
    p.add_argument("--radii", default="1,2")
    p.add_argument("--jobs", type=int, default=1)
    _add_constants(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="kernel sizes over a family sweep")
    p.add_argument("--family", required=True, choices=FAMILIES[:5])
    p.add_argument("--sizes", required=True, help="comma-separated sizes")
    p.add_argument("--params")
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--k", type=int, help="budget; default is a greedy upper bound on ds_r")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include wall-clock millis (not reproducible)")
    _add_constants(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sparsity-report", help="degeneracy and weak-reach bounds")
    p.add_argument("graph")
    p.add_argument("--max-m", type=int, default=4)
    p.set_defaults(func=cmd_sparsity)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=sys.stderr)
    try:
        return args.func(args)
    except RefusalError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSAL
    except (UsageError, GraphFormatError, ContractViolation, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

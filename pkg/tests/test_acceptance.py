"""Acceptance criteria. Each test prints one PASS/FAIL line, also collected in the summary."""

import contextlib
import io
import itertools
import random
import time

import networkx as nx
import pytest

from domkernel import generators as gen
from domkernel.approx import Tag, annotated_to_plain, annotated_win_win
from domkernel.cli import main
from domkernel.closure import DensityWitness, r_closure, short_paths_closure
from domkernel.graph import Graph, to_edge_list
from domkernel.oracles import (
    exact_annotated_ds,
    exact_connected_ds,
    exact_ds,
    greedy_dominator,
    has_dominator_within,
    solve_motif,
    solve_set_cover,
)
from domkernel.kernel import kernelize_annotated
from domkernel.verify import check_core_soundness, check_kernels, sweep_instances

from conftest import from_nx, record_criterion

pytestmark = pytest.mark.acceptance


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def nx_dominates(h: nx.Graph, D, Z, r: int) -> bool:
    covered = set()
    for x in D:
        covered.update(nx.single_source_shortest_path_length(h, x, cutoff=r))
    return set(Z) <= covered


def nx_projection(h: nx.Graph, cl, u: int, r: int) -> set:
    # cl-vertices reachable from u by a path of length <= r with no inner vertex in cl
    free = h.subgraph((set(h) - set(cl)) | {u})
    near = nx.single_source_shortest_path_length(free, u, cutoff=r - 1)
    return {w for w in cl if any(x in near for x in h[w])}


def sparse_pool(max_n: int, seed: int) -> list[tuple[str, Graph]]:
    rng = random.Random(seed)
    pool = list(sweep_instances(max_n))
    for i in range(12):
        n = rng.randint(8, max_n)
        pool.append((f"gnp{n}s{i}", from_nx(nx.gnp_random_graph(n, 2.5 / n, seed=rng.randrange(10**6)))))
    return pool


def test_criterion_1_kernel_equivalence():
    t0 = time.perf_counter()
    rows = []
    for name, g in sweep_instances(40):
        for r in (1, 2, 3):
            ds = exact_ds(g, r).optimum
            rows.extend(check_kernels(name, g, r, range(ds + 2)))
    bad = [row for row in rows if not row.ok]
    secs = time.perf_counter() - t0
    ok = not bad and secs < 300
    record_criterion(1, "kernel equivalence", ok, f"{len(rows)} verdicts, {len(bad)} mismatches, {secs:.1f}s")
    assert not bad, bad[:5]
    assert secs < 300


def test_criterion_2_core_soundness():
    t0 = time.perf_counter()
    checked = failed = 0
    for name, g in sweep_instances(22):
        for r in (1, 2):
            ds = exact_ds(g, r).optimum
            for k in (ds, ds + 1):
                for rec in check_core_soundness(g, r, k):
                    checked += 1
                    failed += not (rec["core"] and rec["ds_kept"])
    secs = time.perf_counter() - t0
    ok = failed == 0 and secs < 600
    record_criterion(2, "domination-core soundness", ok, f"{checked} batch checks, {failed} failed, {secs:.1f}s")
    assert failed == 0 and secs < 600


def test_criterion_3_closure_audit():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    pool = sparse_pool(40, 3)
    closures = witnesses = failed = 0
    for _ in range(500):
        name, g = rng.choice(pool)
        h = to_nx(g)
        X = rng.sample(range(g.n), rng.randint(1, max(1, g.n // 3)))
        r, xi = rng.randint(1, 3), rng.randint(1, 8)
        c = r_closure(g, X, r, xi)
        if isinstance(c, DensityWitness):
            witnesses += 1
            failed += not (c.holds() and c.x_size == len(set(X)))
            continue
        closures += 1
        cl = c.closure
        worst = max((len(nx_projection(h, cl, u, r)) for u in range(g.n) if u not in cl), default=0)
        good = (
            set(X) <= cl
            and len(cl) <= ((r - 1) * xi + 2) * len(set(X))
            and worst <= xi * (1 + (r - 1) * xi)
        )
        failed += not good
    secs = time.perf_counter() - t0
    ok = failed == 0 and secs < 120
    record_criterion(3, "closure audit", ok, f"500 cases ({closures} closures, {witnesses} witnesses), {failed} failed, {secs:.1f}s")
    assert failed == 0 and secs < 120


def _short_paths(g, X, r):
    xi = 4
    for _ in range(7):
        out = short_paths_closure(g, X, r, xi)
        if not isinstance(out, DensityWitness):
            return out
        xi *= 2
    return short_paths_closure(g, X, r, xi, closed=X)


def test_criterion_4_short_paths_distances():
    t0 = time.perf_counter()
    rng = random.Random(77)
    graphs = [g for g in (
        gen.path(60), gen.cycle(60), gen.grid(7, 8), gen.grid(6, 10), gen.subdivided_clique(5, 2),
        gen.subdivided_clique(6, 2), gen.caterpillar(12, 3),
        *(gen.random_bounded_degree(n, 3, s) for n in (40, 50, 60) for s in (1, 2)),
        *(from_nx(nx.gnp_random_graph(60, 2.2 / 60, seed=s)) for s in (5, 6)),
    ) if g.n <= 60]
    pairs = failed = 0
    for g in graphs:
        h = to_nx(g)
        dist = dict(nx.all_pairs_shortest_path_length(h, cutoff=3))
        for _ in range(25):
            X = set(rng.sample(range(g.n), rng.randint(2, g.n // 4)))
            r = rng.randint(1, 3)
            Xp = _short_paths(g, X, r).vertices
            inner = dict(nx.all_pairs_shortest_path_length(h.subgraph(Xp), cutoff=r))
            for u, v in itertools.combinations(sorted(X), 2):
                if dist[u].get(v, r + 1) <= r:
                    pairs += 1
                    failed += inner[u].get(v) != dist[u][v]
    secs = time.perf_counter() - t0
    ok = failed == 0 and secs < 120
    record_criterion(4, "short-paths closure distances", ok, f"{pairs} pairs on {len(graphs)} graphs, {failed} failed, {secs:.1f}s")
    assert failed == 0 and secs < 120


def test_criterion_5_win_win_certificates():
    t0 = time.perf_counter()
    rng = random.Random(5)
    counts = {tag: 0 for tag in Tag}
    failed = 0
    for name, g in sparse_pool(40, 11):
        h = to_nx(g)
        for r in (1, 2, 3):
            targets = [list(range(g.n)), sorted(rng.sample(range(g.n), max(1, g.n // 2)))]
            for Z in targets:
                opt = exact_annotated_ds(g, Z, r).optimum
                for k in sorted({0, max(0, opt - 1), opt, opt + 1}):
                    res = annotated_win_win(g, Z, r, k)
                    counts[res.tag] += 1
                    if res.tag is Tag.SCATTERED:
                        A = sorted(res.scattered)
                        far = all(nx.shortest_path_length(h, a, b) > 2 * r
                                  for a, b in itertools.combinations(A, 2) if nx.has_path(h, a, b))
                        failed += not (far and len(A) >= k + 1 and set(A) <= set(Z) and opt > k)
                    else:
                        failed += not nx_dominates(h, res.dominator, Z, r)
    secs = time.perf_counter() - t0
    ok = failed == 0 and secs < 180
    detail = ", ".join(f"{t.value}={c}" for t, c in counts.items())
    record_criterion(5, "win-win certificates", ok, f"{detail}, {failed} failed, {secs:.1f}s")
    assert failed == 0 and secs < 180


def _gadget_cases():
    for h in nx.graph_atlas_g()[1:]:
        yield from_nx(h)
    rng = random.Random(6)
    for n in (8, 9, 10):
        for _ in range(3):
            yield from_nx(nx.gnp_random_graph(n, 0.3, seed=rng.randrange(10**6)))


def test_criterion_6_gadget_identity():
    t0 = time.perf_counter()
    checked = failed = 0
    for g in _gadget_cases():
        for r in (1, 2):
            for mask in range(1 << g.n):
                Z = [v for v in range(g.n) if mask >> v & 1]
                gp, _ = annotated_to_plain(g, Z, r)
                checked += 1
                failed += exact_ds(gp, r, cap=200).optimum != exact_annotated_ds(g, Z, r).optimum + 1
    secs = time.perf_counter() - t0
    ok = failed == 0 and secs < 300
    record_criterion(6, "gadget identity", ok, f"{checked} (graph, Z, r) cases, {failed} failed, {secs:.1f}s")
    assert failed == 0 and secs < 300


def _trees(max_n: int):
    yield Graph.empty(1)
    for n in range(2, max_n + 1):
        for t in nx.nonisomorphic_trees(n):
            if max(d for _, d in t.degree()) <= 3:
                yield from_nx(t)


def test_criterion_7_reduction_equivalences():
    t0 = time.perf_counter()
    motif = motif_bad = 0
    for tree in _trees(7):
        for k in range(1, min(3, tree.n) + 1):
            for cols in itertools.product(range(1, k + 1), repeat=tree.n):
                if len(set(cols)) < k:
                    continue
                cds, budget = gen.motif_to_cds(gen.MotifInstance(tree, k, cols))
                opt = exact_connected_ds(cds).optimum
                motif += 1
                motif_bad += (solve_motif(tree, k, cols) is not None) != (opt is not None and opt <= budget)
    sc = sc_bad = 0
    for u in range(5):
        subsets = [frozenset(s) for m in range(u + 1) for s in itertools.combinations(range(u), m)]
        for f in range(5):
            for fams in itertools.combinations(subsets, f):
                for k in range(f + 1):
                    inst = gen.SetCoverInstance.of(u, fams, k)
                    want = solve_set_cover(u, inst.families, k) is not None
                    for r0 in (1, 2):
                        g, r, budget = gen.setcover_to_rds(inst, r0)
                        sc += 1
                        sc_bad += want != has_dominator_within(g, range(g.n), r, budget, cap=10**6)
    secs = time.perf_counter() - t0
    ok = motif_bad == 0 and sc_bad == 0 and secs < 600
    record_criterion(7, "reduction equivalences", ok,
                     f"motif {motif} cases/{motif_bad} bad, set cover {sc} cases/{sc_bad} bad, {secs:.1f}s")
    assert motif_bad == 0 and sc_bad == 0 and secs < 600


def test_criterion_8_linear_size_trend():
    t0 = time.perf_counter()
    ratios = []
    for m in range(6, 21, 2):
        g = gen.grid(m, m)
        k = exact_ds(g, 1).optimum if g.n <= 64 else len(greedy_dominator(g, None, 1))
        out = kernelize_annotated(g, 1, k)
        ratios.append(out.trace["Y"] / k)
    spread = max(ratios) / min(ratios)
    secs = time.perf_counter() - t0
    ok = spread <= 3 and secs < 300
    series = " ".join(f"{x:.2f}" for x in ratios)
    record_criterion(8, "linear-size trend on grids", ok, f"|Y|/k = {series}; max/min {spread:.2f}, {secs:.1f}s")
    assert spread <= 3 and secs < 300


def _run(argv) -> tuple[int, bytes]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue().encode()


def test_criterion_9_cli_determinism(tmp_path):
    t0 = time.perf_counter()
    gfile = tmp_path / "g.txt"
    gfile.write_text(to_edge_list(gen.random_bounded_degree(24, 3, 4)))
    zfile = tmp_path / "z.txt"
    zfile.write_text("0 3 5 9 12\n")
    g = str(gfile)
    commands = [
        ["gen", "--family", "grid", "--params", "rows=4,cols=5"],
        ["gen", "--family", "path", "--params", "n=9"],
        ["gen", "--family", "cycle", "--params", "n=9"],
        ["gen", "--family", "subclique", "--params", "n=4,t=2"],
        ["gen", "--family", "randdeg", "--params", "n=30,d=3", "--seed", "7"],
        ["gen", "--family", "motif2cds", "--params", "n=7,k=3", "--seed", "3"],
        ["gen", "--family", "sc2rds", "--params", "u=4,f=3,k=2,r0=2", "--seed", "3"],
        ["approx", g, "--r", "2", "--k", "2"],
        ["approx", g, "--r", "1", "--k", "20", "--target-file", str(zfile)],
        ["closure", g, "--r", "2", "--xi", "3", "--set", str(zfile)],
        ["core", g, "--r", "1", "--k", "8"],
        ["kernelize", g, "--r", "1", "--k", "8", "--mode", "r1"],
        ["kernelize", g, "--r", "2", "--k", "4", "--mode", "annotated"],
        ["kernelize", g, "--r", "2", "--k", "4", "--mode", "plain"],
        ["kernelize", g, "--r", "1", "--k", "1"],
        ["solve", g, "--r", "2"],
        ["solve", g, "--targets", str(zfile)],
        ["verify", "--graph", g, "--radii", "1,2"],
        ["verify", "--max-n", "10", "--radii", "1"],
        ["bench", "--family", "randdeg", "--sizes", "10,20", "--seed", "2"],
        ["sparsity-report", g, "--max-m", "3"],
    ]
    mismatched = []
    for argv in commands:
        first, second = _run(argv), _run(argv)
        if first != second or not first[1]:
            mismatched.append(" ".join(argv))
    # the worker pool must not change the output
    serial = _run(["bench", "--family", "grid", "--sizes", "3,4,5"])
    pooled = _run(["bench", "--family", "grid", "--sizes", "3,4,5", "--jobs", "2"])
    if serial != pooled:
        mismatched.append("bench --jobs 2")
    secs = time.perf_counter() - t0
    ok = not mismatched and secs < 60
    record_criterion(9, "CLI determinism", ok, f"{len(commands) + 1} commands, {len(mismatched)} differ, {secs:.1f}s")
    assert not mismatched, mismatched
    assert secs < 60

"""Deterministic graph families and the two hardness reductions as instance factories."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from math import comb
from typing import Sequence

from .graph import ContractViolation, Graph, GraphBuilder, to_edge_list

__all__ = [
    "MotifInstance",
    "SetCoverInstance",
    "caterpillar",
    "color_graph",
    "cycle",
    "graph_hash",
    "grid",
    "motif_degree_taming",
    "motif_to_cds",
    "path",
    "proper_edge_coloring",
    "random_bounded_degree",
    "setcover_counts",
    "setcover_to_rds",
    "star",
    "subdivided_clique",
]


def _positive(**kw: int) -> None:
    for name, value in kw.items():
        if value < 1:
            raise ValueError(f"{name} must be positive, got {value}")


def graph_hash(g: Graph) -> str:
    return hashlib.sha256(to_edge_list(g).encode()).hexdigest()


def path(n: int) -> Graph:
    _positive(n=n)
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def grid(rows: int, cols: int) -> Graph:
    """Row-major grid: vertex ``i * cols + j`` sits in row i, column j."""
    _positive(rows=rows, cols=cols)
    edges = []
    for i in range(rows):
        for j in range(cols):
            v = i * cols + j
            if j + 1 < cols:
                edges.append((v, v + 1))
            if i + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def star(leaves: int) -> Graph:
    """Centre 0 with ``leaves`` pendant vertices."""
    if leaves < 0:
        raise ValueError("leaves must be non-negative")
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def caterpillar(spine: int, legs: int) -> Graph:
    """A path of ``spine`` vertices, each carrying ``legs`` pendant vertices."""
    _positive(spine=spine)
    if legs < 0:
        raise ValueError("legs must be non-negative")
    b = GraphBuilder(path(spine))
    for s in range(spine):
        for _ in range(legs):
            b.add_edge(s, b.add_vertex())
    return b.build()


def subdivided_clique(n: int, t: int) -> Graph:
    """K_n with every edge replaced by a path through ``t`` new vertices."""
    _positive(n=n)
    if t < 0:
        raise ValueError("t must be non-negative")
    b = GraphBuilder(Graph.empty(n))
    for u in range(n):
        for v in range(u + 1, n):
            b.add_path(u, t + 1, end=v)
    return b.build()


def random_bounded_degree(n: int, d: int, seed: int) -> Graph:
    """Seeded stub matching; self-loops and repeated pairs are dropped, so degrees are at most ``d``."""
    _positive(n=n, d=d)
    if (n * d) % 2:
        raise ValueError(f"no graph on {n} vertices has all degrees {d}: n*d is odd")
    if d >= n:
        raise ValueError(f"degree {d} is not realisable on {n} vertices")
    rng = random.Random(seed)
    stubs = [v for v in range(n) for _ in range(d)]
    rng.shuffle(stubs)
    edges = set()
    for a, b in zip(stubs[::2], stubs[1::2]):
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(n, sorted(edges))


# ---- Graph Motif -> Connected Dominating Set ----


@dataclass(frozen=True)
class MotifInstance:
    """Graph with a surjective colouring onto ``1..k``.

    Trees of maximum degree 3 are the intended inputs, but the degree-taming
    output contains cycles, so only surjectivity is enforced here.
    """

    graph: Graph
    k: int
    colors: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ContractViolation("k must be positive")
        if len(self.colors) != self.graph.n:
            raise ContractViolation("every vertex needs exactly one colour")
        if set(self.colors) != set(range(1, self.k + 1)):
            raise ContractViolation("colouring must be onto 1..k")

    def is_tree(self) -> bool:
        g = self.graph
        if g.m != g.n - 1:
            return False
        seen = {0}
        stack = [0]
        while stack:
            for w in g.adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == g.n


def motif_to_cds(inst: MotifInstance) -> tuple[Graph, int]:
    """Add an edge ``w_i w_i'`` per colour and join ``w_i`` to every vertex of colour i; budget 2k."""
    b = GraphBuilder(inst.graph)
    for i in range(1, inst.k + 1):
        w = b.add_vertex(f"w{i}")
        pend = b.add_vertex(f"w{i}o")
        b.add_edge(w, pend)
        for v, c in enumerate(inst.colors):
            if c == i:
                b.add_edge(w, v)
    return b.build(), 2 * inst.k


def color_graph(inst: MotifInstance) -> dict[int, set[int]]:
    """Colour adjacency: i ~ j when some edge joins colours i and j (i != j)."""
    out: dict[int, set[int]] = {i: set() for i in range(1, inst.k + 1)}
    for u, v in inst.graph.edges():
        a, b = inst.colors[u], inst.colors[v]
        if a != b:
            out[a].add(b)
            out[b].add(a)
    return out


def proper_edge_coloring(g: Graph) -> dict[tuple[int, int], int]:
    """Misra-Gries colouring with at most max_degree + 1 colours, keyed by (u, v) with u < v."""
    ncolors = g.max_degree() + 1
    at: list[dict[int, int]] = [dict() for _ in range(g.n)]  # vertex -> colour -> neighbour

    def free(x: int) -> int:
        return next(c for c in range(1, ncolors + 1) if c not in at[x])

    def paint(x: int, y: int, c: int) -> None:
        at[x][c] = y
        at[y][c] = x

    def wipe(x: int, y: int) -> int:
        c = next(c for c, w in at[x].items() if w == y)
        del at[x][c]
        del at[y][c]
        return c

    for u, v in g.edges():
        fan = [v]
        in_fan = {v}
        while True:
            last = fan[-1]
            ext = next((w for c, w in sorted(at[u].items()) if w not in in_fan and c not in at[last]), None)
            if ext is None:
                break
            fan.append(ext)
            in_fan.add(ext)
        c, d = free(u), free(fan[-1])
        if c != d:
            # swap c and d along the alternating path leaving u on colour d
            walk = []
            x, col = u, d
            while col in at[x]:
                y = at[x][col]
                walk.append((x, y, col))
                x, col = y, (c if col == d else d)
            for x, y, _ in walk:
                wipe(x, y)
            for x, y, col in walk:
                paint(x, y, c if col == d else d)
        colour_of = {w: next(col for col, y in at[u].items() if y == w) for w in fan[1:]}
        j = None
        for idx, w in enumerate(fan):
            if d in at[w]:
                continue
            if all(colour_of.get(fan[i + 1]) is not None and colour_of[fan[i + 1]] not in at[fan[i]]
                   for i in range(idx)):
                j = idx
                break
        if j is None:
            raise RuntimeError("edge colouring failed to find a rotatable fan")
        shifted = [colour_of[fan[i + 1]] for i in range(j)]
        for i in range(1, j + 1):
            wipe(u, fan[i])
        for i, col in enumerate(shifted):
            paint(u, fan[i], col)
        paint(u, fan[j], d)

    coloring = {}
    for x in range(g.n):
        for col, y in at[x].items():
            if x < y:
                coloring[(x, y)] = col
    if len(coloring) != g.m:
        raise RuntimeError("edge colouring left edges uncoloured")
    return coloring


def motif_degree_taming(inst: MotifInstance, delta: int | None = None) -> MotifInstance:
    """Equivalent instance whose colour graph has bounded degree.

    New colours ``(i, j, alpha)`` are numbered ``k + ((i-1)k + (j-1))(delta+1) + alpha``.
    Each edge uv with colours i, j and edge colour alpha gets a path through
    colours (i, 1..j, alpha) then (j, i..1, alpha); the colours above j (resp.
    above i) hang off u (resp. v) as a separate path ending next to it. Every
    missing edge colour at a vertex is filled by a full 1..k path.
    """
    g, k = inst.graph, inst.k
    if delta is None:
        delta = max(g.max_degree(), 1)
    if g.max_degree() > delta:
        raise ContractViolation("delta is below the maximum degree")
    f = proper_edge_coloring(g)
    if any(c > delta + 1 for c in f.values()):
        raise RuntimeError("edge colouring used more than delta + 1 colours")

    def code(i: int, j: int, alpha: int) -> int:
        return k + ((i - 1) * k + (j - 1)) * (delta + 1) + alpha

    # only the vertices of G carry over; each edge uv becomes a path through new colours
    b = GraphBuilder(Graph.empty(g.n))
    colors = list(inst.colors)

    def chain(i: int, alpha: int, lo: int, hi: int) -> list[int]:
        # vertices x_{i,j,alpha} for lo <= j <= hi, joined consecutively
        vs = []
        for j in range(lo, hi + 1):
            x = b.add_vertex(f"x{i},{j},{alpha}")
            colors.append(code(i, j, alpha))
            if vs:
                b.add_edge(vs[-1], x)
            vs.append(x)
        return vs

    used: list[set[int]] = [set() for _ in range(g.n)]
    for (u, v), alpha in sorted(f.items()):
        i, j = inst.colors[u], inst.colors[v]
        used[u].add(alpha)
        used[v].add(alpha)
        pu = chain(i, alpha, 1, j)
        pv = chain(j, alpha, 1, i)
        b.add_edge(pu[0], u)
        b.add_edge(pv[0], v)
        b.add_edge(pu[-1], pv[-1])
        if j < k:
            b.add_edge(chain(i, alpha, j + 1, k)[-1], u)
        if i < k:
            b.add_edge(chain(j, alpha, i + 1, k)[-1], v)
    for u in range(g.n):
        for alpha in range(1, delta + 2):
            if alpha not in used[u]:
                b.add_edge(chain(inst.colors[u], alpha, 1, k)[-1], u)
    k_prime = k + (delta + 1) * k * k
    return MotifInstance(b.build(), k_prime, tuple(colors))


# ---- Set Cover -> r-Dominating Set ----


@dataclass(frozen=True)
class SetCoverInstance:
    """Universe ``0..universe_size-1``, a list of families and a budget."""

    universe_size: int
    families: tuple[frozenset[int], ...]
    k: int

    def __post_init__(self):
        if self.universe_size < 0 or self.k < 0:
            raise ContractViolation("universe size and k must be non-negative")
        for fam in self.families:
            if any(not 0 <= e < self.universe_size for e in fam):
                raise ContractViolation("every family must be a subset of the universe")

    @classmethod
    def of(cls, universe_size: int, families: Sequence[Sequence[int]], k: int) -> "SetCoverInstance":
        return cls(universe_size, tuple(frozenset(f) for f in families), k)


def setcover_to_rds(inst: SetCoverInstance, r0: int) -> tuple[Graph, int, int]:
    """Graph whose 3*r0-domination number is at most k exactly when the cover instance is a yes.

    For each copy i: a vertex per family joined pairwise by paths of length
    2*r0, a hub b^i joined to them by paths of length 2*r0, and a pendant
    path of length r0 at b^i. For each element e: a vertex u_e with a pendant
    path of length r0, joined by a path of length 2*r0 to every family vertex
    containing e, in every copy.
    """
    _positive(r0=r0)
    fams = inst.families
    b = GraphBuilder(Graph.empty(0))
    copies: list[list[int]] = []
    for i in range(inst.k):
        a = [b.add_vertex(f"a{i},{x}") for x in range(len(fams))]
        for x in range(len(a)):
            for y in range(x + 1, len(a)):
                b.add_path(a[x], 2 * r0, end=a[y])
        hub = b.add_vertex(f"b{i}")
        for ax in a:
            b.add_path(hub, 2 * r0, end=ax)
        b.add_path(hub, r0)
        copies.append(a)
    for e in range(inst.universe_size):
        ue = b.add_vertex(f"u{e}")
        b.add_path(ue, r0)
        for a in copies:
            for x, fam in enumerate(fams):
                if e in fam:
                    b.add_path(ue, 2 * r0, end=a[x])
    return b.build(), 3 * r0, inst.k


def setcover_counts(inst: SetCoverInstance, r0: int) -> tuple[int, int]:
    """Closed-form (vertices, edges) of :func:`setcover_to_rds`."""
    f, k, u = len(inst.families), inst.k, inst.universe_size
    incidences = sum(len(fam) for fam in inst.families)
    long_paths = k * (comb(f, 2) + f + incidences)
    vertices = k * (f + 1 + r0) + u * (1 + r0) + long_paths * (2 * r0 - 1)
    edges = k * r0 + u * r0 + long_paths * 2 * r0
    return vertices, edges

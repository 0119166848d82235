"""Immutable undirected simple graphs, edge-list I/O and capped traversals."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

__all__ = [
    "ContractViolation",
    "DistanceMap",
    "Graph",
    "GraphBuilder",
    "GraphFormatError",
    "attach_path",
    "bfs_within",
    "bfs_within_avoiding",
    "induced_subgraph",
    "load_edge_list",
    "to_edge_list",
]


class GraphFormatError(ValueError):
    """Raised when an edge list cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ContractViolation(ValueError):
    """A precondition of an operation was not met by the caller."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertex ids ``0..n-1``.

    ``adj[v]`` is the ascending tuple of neighbours of ``v``. Instances are
    never mutated after construction; use :class:`GraphBuilder` or the
    helper functions to derive new graphs.
    """

    adj: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[str] | None = None,
    ) -> "Graph":
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside [0, {n})")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        if labels is not None and len(labels) != n:
            raise ValueError("labels must have one entry per vertex")
        return cls(
            tuple(tuple(sorted(s)) for s in nbrs),
            tuple(labels) if labels is not None else None,
        )

    @classmethod
    def empty(cls, n: int = 0) -> "Graph":
        return cls.from_edges(n, ())

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def __len__(self) -> int:
        return len(self.adj)

    def vertices(self) -> range:
        return range(len(self.adj))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adj[u]
        # adjacency lists are short in the sparse regime; bisect is not worth it
        return v in a

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, a in enumerate(self.adj) for v in a if u < v]

    def label(self, v: int) -> str | None:
        return self.labels[v] if self.labels is not None else None

    def check(self) -> None:
        """Check the structural invariants (symmetry, no loops, sorted, in range)."""
        n = self.n
        for u, a in enumerate(self.adj):
            if list(a) != sorted(set(a)):
                raise ContractViolation(f"neighbours of {u} not sorted/unique")
            for v in a:
                if not 0 <= v < n:
                    raise ContractViolation(f"neighbour {v} of {u} out of range")
                if v == u:
                    raise ContractViolation(f"self-loop at {u}")
                if u not in self.adj[v]:
                    raise ContractViolation(f"asymmetric edge {u}-{v}")


class GraphBuilder:
    """Single-owner mutable builder used by the gadget constructions."""

    def __init__(self, base: Graph | None = None):
        self._nbrs: list[set[int]] = []
        self._labels: list[str] = []
        if base is not None:
            self._nbrs = [set(a) for a in base.adj]
            self._labels = list(base.labels) if base.labels else [""] * base.n

    @property
    def n(self) -> int:
        return len(self._nbrs)

    def add_vertex(self, label: str = "") -> int:
        self._nbrs.append(set())
        self._labels.append(label)
        return len(self._nbrs) - 1

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        self._nbrs[u].add(v)
        self._nbrs[v].add(u)

    def add_path(self, start: int, length: int, end: int | None = None, label: str = "") -> list[int]:
        """Add a path of ``length`` edges leaving ``start``.

        With ``end`` given the path terminates there (``length - 1`` new
        vertices), otherwise ``length`` new vertices are created. Returns
        the full vertex sequence of the path.
        """
        if length < 1:
            raise ValueError("path length must be positive")
        seq = [start]
        fresh = length - 1 if end is not None else length
        for i in range(fresh):
            seq.append(self.add_vertex(f"{label}{i}" if label else ""))
        if end is not None:
            seq.append(end)
        for a, b in zip(seq, seq[1:]):
            self.add_edge(a, b)
        return seq

    def build(self) -> Graph:
        labels = tuple(self._labels) if any(self._labels) else None
        return Graph(tuple(tuple(sorted(s)) for s in self._nbrs), labels)


def load_edge_list(text: str | Iterable[str]) -> Graph:
    """Parse the edge-list format: optional ``p <n>`` header, ``u v`` lines, ``#`` comments."""
    lines = text.splitlines() if isinstance(text, str) else text
    declared: int | None = None
    edges: list[tuple[int, int]] = []
    top = -1
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "p":
            if declared is not None:
                raise GraphFormatError("duplicate header", lineno)
            if len(parts) != 2 or not parts[1].isdigit():
                raise GraphFormatError(f"malformed header {raw.strip()!r}", lineno)
            declared = int(parts[1])
            continue
        if len(parts) != 2 or not (parts[0].isdigit() and parts[1].isdigit()):
            raise GraphFormatError(f"expected 'u v', got {raw.strip()!r}", lineno)
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        edges.append((u, v))
        top = max(top, u, v)
    n = top + 1
    if declared is not None:
        if declared < n:
            raise GraphFormatError(f"header declares {declared} vertices but id {top} used")
        n = declared
    return Graph.from_edges(n, edges)


def to_edge_list(g: Graph) -> str:
    """Serialize with a header and each edge once as ``min max``, sorted."""
    out = [f"p {g.n}"]
    out.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class DistanceMap:
    """Hop distances from ``source`` for every vertex reached within ``cap``."""

    source: int
    cap: int
    dist: Mapping[int, int]
    parent: Mapping[int, int]

    def __contains__(self, v: int) -> bool:
        return v in self.dist

    def path_to(self, v: int) -> list[int]:
        """Vertices of the recorded BFS path from ``source`` to ``v``."""
        path = [v]
        while path[-1] != self.source:
            path.append(self.parent[path[-1]])
        path.reverse()
        return path


def _bfs(adj, source: int, cap: int, blocked) -> tuple[dict[int, int], dict[int, int]]:
    # vertices in ``blocked`` are recorded when reached but never expanded
    dist = {source: 0}
    parent: dict[int, int] = {}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        d = dist[u]
        if d == cap or (u != source and u in blocked):
            continue
        for w in adj[u]:
            if w not in dist:
                dist[w] = d + 1
                parent[w] = u
                queue.append(w)
    return dist, parent


def _check_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} outside [0, {g.n})")


def bfs_within(g: Graph, source: int, cap: int) -> DistanceMap:
    _check_vertex(g, source)
    if cap < 0:
        raise ValueError("cap must be non-negative")
    dist, parent = _bfs(g.adj, source, cap, ())
    return DistanceMap(source, cap, dist, parent)


def bfs_within_avoiding(g: Graph, source: int, cap: int, forbidden) -> DistanceMap:
    """Capped BFS whose paths may end in, but never pass through, ``forbidden``."""
    _check_vertex(g, source)
    if source in forbidden:
        raise ContractViolation(f"source {source} lies in the forbidden set")
    if cap < 0:
        raise ValueError("cap must be non-negative")
    dist, parent = _bfs(g.adj, source, cap, forbidden)
    return DistanceMap(source, cap, dist, parent)


def ball(g: Graph, v: int, radius: int) -> set[int]:
    """Closed ball of the given radius around ``v``."""
    return set(_bfs(g.adj, v, radius, ())[0])


def multi_source_distances(g: Graph, sources: Iterable[int], cap: int) -> dict[int, int]:
    """Distance to the nearest source, for vertices within ``cap``."""
    dist = {s: 0 for s in sources}
    queue = deque(sorted(dist))
    while queue:
        u = queue.popleft()
        d = dist[u]
        if d == cap:
            continue
        for w in g.adj[u]:
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return dist


def induced_subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Return ``G[keep]`` relabelled to ``0..|keep|-1`` in ascending old-id order."""
    kept = sorted(set(keep))
    for v in kept:
        _check_vertex(g, v)
    remap = {old: new for new, old in enumerate(kept)}
    adj = tuple(tuple(remap[w] for w in g.adj[old] if w in remap) for old in kept)
    labels = tuple(g.labels[v] for v in kept) if g.labels is not None else None
    return Graph(adj, labels), remap


def attach_path(g: Graph, start: int, length: int) -> tuple[Graph, int]:
    """Append ``length`` new vertices forming a path out of ``start``."""
    _check_vertex(g, start)
    b = GraphBuilder(g)
    seq = b.add_path(start, length)
    return b.build(), seq[-1]

"""Undirected simple graph with dense integer node ids.

Nodes are numbered ``0..n-1`` in arrival order and are never removed.
Neighbor lists are kept sorted so that every traversal visits nodes in a
reproducible order.
"""

from __future__ import annotations

from bisect import bisect_left, insort
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator


class GraphError(ValueError):
    """Base class for rejected graph mutations and malformed input."""


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class UnknownNode(GraphError):
    pass


class ParseError(GraphError):
    """Malformed edge-list line; ``lineno`` is 1-based."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class Graph:
    """Append-only undirected simple graph.

    ``version`` increases by one on every mutation (node or edge insertion)
    and lets derived tables detect that they are out of date.
    """

    __slots__ = ("_adj", "_m", "version")

    def __init__(self, n: int = 0):
        if n < 0:
            raise ValueError("node count must be non-negative")
        self._adj: list[list[int]] = [[] for _ in range(n)]
        self._m = 0
        self.version = 0

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return self._m

    def __len__(self) -> int:
        return len(self._adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self._m})"

    def _check(self, v: int) -> None:
        if not (0 <= v < len(self._adj)):
            raise UnknownNode(f"node {v} does not exist (n={len(self._adj)})")

    def add_node(self) -> int:
        self._adj.append([])
        self.version += 1
        return len(self._adj) - 1

    def add_edge(self, u: int, v: int) -> None:
        self._check(u)
        self._check(v)
        if u == v:
            raise SelfLoop(f"self-loop on node {u}")
        if self.has_edge(u, v):
            raise DuplicateEdge(f"edge ({u}, {v}) already present")
        insort(self._adj[u], v)
        insort(self._adj[v], u)
        self._m += 1
        self.version += 1

    def has_edge(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        a = self._adj[u]
        i = bisect_left(a, v)
        return i < len(a) and a[i] == v

    def neighbors(self, v: int) -> list[int]:
        """Sorted neighbor list. Do not mutate the returned list."""
        self._check(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        self._check(v)
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u, nbrs in enumerate(self._adj):
            for v in nbrs[bisect_left(nbrs, u + 1):]:
                yield u, v

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g._adj = [list(a) for a in self._adj]
        g._m = self._m
        g.version = self.version
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    @property
    def adjacency(self) -> list[list[int]]:
        # read-only view for hot loops in the cut engine
        return self._adj


@dataclass(frozen=True)
class DistanceMap:
    source: int
    radius: int
    dist: dict[int, int] = field(repr=False)

    def nodes(self) -> set[int]:
        return set(self.dist)

    def shell(self, d: int) -> list[int]:
        return sorted(u for u, du in self.dist.items() if du == d)


def bfs_distances(adj: list[list[int]], source: int, k: int) -> dict[int, int]:
    """Hop distances from ``source`` to every node within ``k`` hops."""
    dist = {source: 0}
    if k == 0:
        return dist
    frontier = [source]
    for d in range(1, k + 1):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return dist


def truncated_bfs(g: Graph, source: int, k: int) -> DistanceMap:
    if k < 0:
        raise ValueError("radius must be non-negative")
    g._check(source)
    return DistanceMap(source, k, bfs_distances(g.adjacency, source, k))


def all_distances(g: Graph, source: int) -> dict[int, int]:
    """Unbounded BFS from ``source`` over its connected component."""
    g._check(source)
    dist = {source: 0}
    q = deque([source])
    adj = g.adjacency
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def load_edge_list(text: str) -> tuple[Graph, dict[int, int]]:
    """Parse ``"u v"`` lines into a graph.

    Original ids need not be dense; they are remapped to ``0..n-1`` in
    increasing order of the original id. Returns the graph and the mapping
    ``original id -> dense id``. Lines starting with ``#`` and blank lines
    are skipped.
    """
    pairs: list[tuple[int, int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise ParseError(lineno, f"expected two integers, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(lineno, f"non-integer node id in {line!r}") from None
        if u < 0 or v < 0:
            raise ParseError(lineno, "node ids must be non-negative")
        pairs.append((lineno, u, v))

    mapping = {orig: i for i, orig in enumerate(sorted({x for _, u, v in pairs for x in (u, v)}))}
    g = Graph(len(mapping))
    for lineno, u, v in pairs:
        try:
            g.add_edge(mapping[u], mapping[v])
        except (SelfLoop, DuplicateEdge) as exc:
            raise type(exc)(f"line {lineno}: {exc}") from None
    return g, mapping


def store_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges())

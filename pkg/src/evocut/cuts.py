"""k-neighborhood balls, their cuts, and the pulling-power table.

The pulling power of ``v`` at radius ``k`` is the number of edges leaving
the ball ``B(v, k)`` of nodes within ``k`` hops of ``v``. At ``k = 0`` it is
the degree of ``v``.

Two routes produce a :class:`PullingPowerTable`: :func:`recompute_all`
rebuilds it from scratch, and :func:`apply_edge_incremental` patches the
previous table after one edge insertion.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .graph import Graph, UnknownNode, bfs_distances


class StaleTable(RuntimeError):
    """The table does not describe the graph state it is being applied to."""


@dataclass(frozen=True)
class Ball:
    center: int
    radius: int
    members: frozenset[int]

    def __contains__(self, v: object) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)


def ball(g: Graph, v: int, k: int) -> Ball:
    if k < 0:
        raise ValueError("radius must be non-negative")
    g.neighbors(v)  # existence check
    return Ball(v, k, frozenset(bfs_distances(g.adjacency, v, k)))


def cut_size(g: Graph, S: Iterable[int]) -> int:
    """Number of undirected edges with exactly one endpoint in ``S``."""
    members = set(S)
    n = g.n
    for v in members:
        if not (0 <= v < n):
            raise UnknownNode(f"node {v} does not exist (n={n})")
    adj = g.adjacency
    return sum(1 for a in members for b in adj[a] if b not in members)


def _ball_cut(adj: list[list[int]], v: int, k: int) -> tuple[dict[int, int], int]:
    dist = bfs_distances(adj, v, k)
    # only the outermost shell can have neighbors outside the ball
    cut = 0
    for u, du in dist.items():
        if du == k:
            for w in adj[u]:
                if w not in dist:
                    cut += 1
    return dist, cut


def pulling_power(g: Graph, v: int, k: int) -> int:
    if k < 0:
        raise ValueError("radius must be non-negative")
    if k == 0:
        return g.degree(v)
    g.neighbors(v)
    return _ball_cut(g.adjacency, v, k)[1]


def boundary_nodes(g: Graph, v: int, k: int) -> list[int]:
    """Sorted members of ``B(v, k)`` with at least one neighbor outside it."""
    if k < 0:
        raise ValueError("radius must be non-negative")
    g.neighbors(v)
    adj = g.adjacency
    dist = bfs_distances(adj, v, k)
    return sorted(u for u, du in dist.items() if du == k and any(w not in dist for w in adj[u]))


class PullingPowerTable:
    """Immutable snapshot of per-node pulling powers for one graph version.

    ``power`` is a read-only int64 array indexed by node id and
    ``normalizer`` is its sum.
    """

    __slots__ = ("k", "power", "normalizer", "version")

    def __init__(self, k: int, power: np.ndarray, version: int):
        power = np.array(power, dtype=np.int64)
        power.setflags(write=False)
        self.k = k
        self.power = power
        self.normalizer = int(power.sum())
        self.version = version

    def __len__(self) -> int:
        return len(self.power)

    def __getitem__(self, v: int) -> int:
        return int(self.power[v])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PullingPowerTable):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.power, other.power)

    def __repr__(self) -> str:
        return f"PullingPowerTable(k={self.k}, n={len(self)}, Y={self.normalizer})"

    def as_dict(self) -> dict[int, int]:
        return {v: int(x) for v, x in enumerate(self.power)}

    def checksum(self) -> int:
        """CRC-32 of the powers as little-endian int64."""
        return zlib.crc32(self.power.astype("<i8").tobytes())


def recompute_all(g: Graph, k: int, chunk: int = 512) -> PullingPowerTable:
    """Full rebuild of the table.

    Ball membership comes from a hop-limited all-sources shortest-path
    sweep; each node's cut is then the number of edges whose endpoints sit
    on opposite sides of its ball.
    """
    if k < 0:
        raise ValueError("radius must be non-negative")
    n = g.n
    if k == 0 or g.m == 0:
        return PullingPowerTable(k, g.degrees() if k == 0 else np.zeros(n, np.int64), g.version)
    edges = np.fromiter((x for e in g.edges() for x in e), dtype=np.int64, count=2 * g.m).reshape(-1, 2)
    a, b = edges[:, 0], edges[:, 1]
    adj = csr_matrix((np.ones(g.m), (a, b)), shape=(n, n))
    power = np.empty(n, dtype=np.int64)
    for start in range(0, n, chunk):
        idx = np.arange(start, min(start + chunk, n))
        dist = dijkstra(adj, directed=False, unweighted=True, indices=idx, limit=k + 0.5)
        inside = dist <= k
        power[idx] = np.count_nonzero(inside[:, a] != inside[:, b], axis=1)
    return PullingPowerTable(k, power, g.version)


def apply_edge_incremental(table: PullingPowerTable, g: Graph, edge: tuple[int, int]) -> PullingPowerTable:
    """Table for ``g`` given the table for ``g`` without ``edge``.

    ``g`` must already contain ``edge``; if one endpoint is a node added
    after the table was built, the node insertion is absorbed too.
    """
    u, v = edge
    k = table.k
    n_old = len(table)
    grown = g.n - n_old
    if grown not in (0, 1) or g.version != table.version + grown + 1:
        raise StaleTable(f"table at version {table.version} (n={n_old}) cannot absorb graph version {g.version} (n={g.n})")
    if grown and n_old not in (u, v):
        raise StaleTable("newly added node is not an endpoint of the edge")
    if not g.has_edge(u, v):
        raise StaleTable(f"graph does not contain edge ({u}, {v})")

    power = np.zeros(g.n, dtype=np.int64)
    power[:n_old] = table.power
    adj = g.adjacency

    if k == 0:
        power[u] += 1
        power[v] += 1
        return PullingPowerTable(k, power, g.version)

    if len(adj[u]) == 1 or len(adj[v]) == 1:
        leaf, anchor = (u, v) if len(adj[u]) == 1 else (v, u)
        # A fresh leaf changes no distances between old nodes; the new edge
        # leaves B(w, k) exactly when the anchor is on w's outer shell.
        dist = bfs_distances(adj, anchor, k)
        shell = [w for w, d in dist.items() if d == k and w != leaf]
        power[shell] += 1
        power[leaf] = _ball_cut(adj, leaf, k)[1]
        return PullingPowerTable(k, power, g.version)

    # Distances in the graph without the edge. If w sits at distances a, b
    # from u, v with |a - b| <= 1, no shortest path from w gets shorter, so
    # its ball is unchanged and the edge joins its cut iff {a, b} == {k, k+1}.
    # Only nodes with a larger gap need a fresh search.
    du = _bfs_without_edge(adj, u, k + 1, u, v)
    dv = _bfs_without_edge(adj, v, k + 1, u, v)
    far = k + 2  # stands in for "more than k + 1"
    for w in set(du).union(dv):
        a, b = du.get(w, far), dv.get(w, far)
        if min(a, b) > k:
            continue
        if abs(a - b) <= 1:
            if max(a, b) == k + 1:
                power[w] += 1
        else:
            power[w] = _ball_cut(adj, w, k)[1]
    return PullingPowerTable(k, power, g.version)


def _bfs_without_edge(adj: list[list[int]], source: int, k: int, u: int, v: int) -> dict[int, int]:
    """Like :func:`bfs_distances` but ignoring the edge ``(u, v)``."""
    dist = {source: 0}
    frontier = [source]
    for d in range(1, k + 1):
        nxt = []
        for x in frontier:
            skip = v if x == u else u if x == v else -1
            for y in adj[x]:
                if y != skip and y not in dist:
                    dist[y] = d
                    nxt.append(y)
        if not nxt:
            break
        frontier = nxt
    return dist

"""Independent reference computations for the test suite.

Nothing here imports the cut engine, the evolution loop or the fitters:
distances come from scipy's Floyd-Warshall, cuts are counted straight from
their set definition, and the samplers draw from the target laws directly.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import floyd_warshall


def random_edges(rng: np.random.Generator, n: int, p: float) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]


def all_pairs(n: int, edges) -> np.ndarray:
    """Hop-distance matrix; ``inf`` between components."""
    if n == 0:
        return np.zeros((0, 0))
    edges = list(edges)
    rows = [u for u, v in edges] + [v for u, v in edges]
    cols = [v for u, v in edges] + [u for u, v in edges]
    adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    return floyd_warshall(adj, directed=False, unweighted=True)


def brute_ball(dist: np.ndarray, v: int, k: int) -> set[int]:
    return {u for u in range(len(dist)) if dist[v, u] <= k}


def brute_cut(edges, S: set[int]) -> int:
    return sum(1 for a, b in edges if (a in S) != (b in S))


def brute_power(dist: np.ndarray, edges, v: int, k: int) -> int:
    return brute_cut(edges, brute_ball(dist, v, k))


def brute_boundary(dist: np.ndarray, edges, v: int, k: int) -> set[int]:
    ball = brute_ball(dist, v, k)
    out = set()
    for a, b in edges:
        if a in ball and b not in ball:
            out.add(a)
        elif b in ball and a not in ball:
            out.add(b)
    return out


def zipf_sample(gamma: float, n: int, seed: int) -> np.ndarray:
    """Exact discrete power law on k >= 1 (numpy's rejection sampler)."""
    return np.random.default_rng(seed).zipf(gamma, n)


def stretched_sample(beta: float, kappa: float, n: int, seed: int) -> np.ndarray:
    """Integers with P(K >= k) = exp(-(k/kappa)**beta) at every integer k >= 0.

    Inverse-CDF draw of the continuous law, floored.
    """
    u = np.random.default_rng(seed).random(n)
    return np.floor(kappa * (-np.log1p(-u)) ** (1.0 / beta)).astype(np.int64)


def geometric_sample(p: float, n: int, seed: int) -> np.ndarray:
    """P(K >= k) = (1-p)**k on k >= 0: a stretched exponential with beta = 1."""
    return np.random.default_rng(seed).geometric(p, n) - 1

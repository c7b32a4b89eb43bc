"""Breadth-first distance kernels over CSR adjacency.

The hot loops (single-source and all-pairs BFS on the half-edge metric graph
and on intersection trees) are compiled with numba. Setting the environment
variable RANDWALLS_PURE_PYTHON=1 selects a pure-numpy fallback instead; both
paths compute identical integer distances. -1 marks unreachable nodes.
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("RANDWALLS_PURE_PYTHON", "0") != "1"

if USE_NUMBA:
    from numba import njit
else:  # pragma: no cover - exercised via env flag in the benchmark

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True)
def _bfs_csr(indptr, indices, source, dist):
    n = dist.shape[0]
    for i in range(n):
        dist[i] = -1
    queue = np.empty(n, dtype=np.int32)
    head = 0
    tail = 0
    dist[source] = 0
    queue[tail] = source
    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if dist[v] < 0:
                dist[v] = du + 1
                queue[tail] = v
                tail += 1


def _bfs_numpy(indptr, indices, source, dist):
    n = dist.shape[0]
    dist[:] = -1
    dist[source] = 0
    frontier = np.zeros(n, dtype=bool)
    frontier[source] = True
    level = 0
    while frontier.any():
        level += 1
        nxt = np.zeros(n, dtype=bool)
        for u in np.flatnonzero(frontier):
            nbrs = indices[indptr[u]:indptr[u + 1]]
            nxt[nbrs] = True
        nxt &= dist < 0
        dist[nxt] = level
        frontier = nxt


def bfs_distances(indptr: np.ndarray, indices: np.ndarray, source: int) -> np.ndarray:
    """Distances from `source` to every node; -1 if unreachable."""
    n = indptr.shape[0] - 1
    dist = np.empty(n, dtype=np.int32)
    if USE_NUMBA:
        _bfs_csr(indptr, indices, np.int32(source), dist)
    else:
        _bfs_numpy(indptr, indices, source, dist)
    return dist


def all_pairs_distances(indptr: np.ndarray, indices: np.ndarray) -> np.ndarray:
    n = indptr.shape[0] - 1
    out = np.empty((n, n), dtype=np.int32)
    for s in range(n):
        if USE_NUMBA:
            _bfs_csr(indptr, indices, np.int32(s), out[s])
        else:
            _bfs_numpy(indptr, indices, s, out[s])
    return out


def build_csr(n: int, edges) -> tuple[np.ndarray, np.ndarray]:
    """CSR arrays for an undirected graph on nodes 0..n-1."""
    deg = np.zeros(n + 1, dtype=np.int32)
    for u, v in edges:
        deg[u + 1] += 1
        deg[v + 1] += 1
    indptr = np.cumsum(deg, dtype=np.int32)
    indices = np.empty(indptr[-1], dtype=np.int32)
    fill = indptr[:-1].copy()
    for u, v in edges:
        indices[fill[u]] = v
        fill[u] += 1
        indices[fill[v]] = u
        fill[v] += 1
    return indptr, indices

"""Compare the numba BFS kernel against the pure-numpy fallback.

Run twice to see both paths:

    python benchmarks/bench_distance.py
    RANDWALLS_PURE_PYTHON=1 python benchmarks/bench_distance.py

The kernel operates on the half-unit graph (vertices plus edge midpoints)
of a patch 1-skeleton, which is where all balance verification time goes.
"""

import os
import random
import statistics
import time

from randwalls import dist_kernel
from randwalls.dist_kernel import all_pairs_distances, bfs_distances, build_csr


def random_graph(rng, n, extra):
    edges = [(rng.randrange(i + 1), i + 1) for i in range(n - 1)]
    for _ in range(extra):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            edges.append((a, b))
    return edges


def bench(n_nodes=2000, extra_edges=3000, repeats=5, seed=0):
    rng = random.Random(seed)
    edges = random_graph(rng, n_nodes, extra_edges)
    indptr, indices = build_csr(n_nodes, edges)

    bfs_distances(indptr, indices, 0)  # warm up (numba compilation)

    single = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        for src in range(0, n_nodes, max(1, n_nodes // 50)):
            bfs_distances(indptr, indices, src)
        single.append(time.perf_counter() - t0)

    small_ptr, small_idx = build_csr(300, random_graph(rng, 300, 450))
    all_pairs = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        all_pairs_distances(small_ptr, small_idx)
        all_pairs.append(time.perf_counter() - t0)

    mode = "numba" if dist_kernel.USE_NUMBA else "pure-numpy"
    print(f"kernel: {mode}")
    print(f"  50 BFS runs on {n_nodes} nodes: "
          f"median {statistics.median(single) * 1e3:.1f} ms")
    print(f"  all-pairs on 300 nodes:        "
          f"median {statistics.median(all_pairs) * 1e3:.1f} ms")


if __name__ == "__main__":
    print(f"RANDWALLS_PURE_PYTHON={os.environ.get('RANDWALLS_PURE_PYTHON', '')!r}")
    bench()

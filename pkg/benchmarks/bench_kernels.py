#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallbacks.

Runs each kernel on seeded random graphs of increasing size and prints a
table of best-of-N wall times plus the speedup factor. Invoke directly:

    python3 benchmarks/bench_kernels.py [--repeat 5]

The numba backend must be importable for the comparison to make sense; the
script warms the JIT cache before timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from walkrank import _kernels
from walkrank.graph import Graph


def random_graph(n: int, p: float, seed: int, *, directed: bool) -> Graph:
    """Uniform random graph with ~p of all pairs present.

    Unlike the library generators (which enumerate every candidate pair and
    are only meant for test-scale graphs), this samples edges directly, so
    memory stays proportional to the edge count.
    """
    rng = np.random.default_rng(seed)
    total = n * (n - 1) if directed else n * (n - 1) // 2
    m = int(round(p * total))
    keys = np.empty(0, dtype=np.int64)
    while keys.shape[0] < m:
        k = (m - keys.shape[0]) * 2 + 16
        i = rng.integers(0, n, size=k)
        j = rng.integers(0, n, size=k)
        ok = i != j
        i, j = i[ok], j[ok]
        if not directed:
            i, j = np.minimum(i, j), np.maximum(i, j)
        keys = np.unique(np.concatenate([keys, i * n + j]))
    keys = keys[rng.permutation(keys.shape[0])[:m]]
    edges = list(zip((keys // n).tolist(), (keys % n).tolist()))
    return Graph.from_edges(n, edges, directed=directed)


def best_of(fn, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if _kernels.csr_matvec_numba is None:
        parser.error("numba is not importable; nothing to compare")

    print(f"{'kernel':<16} {'n':>6} {'nnz':>9} "
          f"{'numba [ms]':>11} {'numpy [ms]':>11} {'speedup':>8}")

    cases = [
        ("csr_matvec", 2_000, 0.01),
        ("csr_matvec", 20_000, 0.001),
        ("neumann", 2_000, 0.01),
        ("neumann", 20_000, 0.001),
        ("triangle_diag", 1_000, 0.05),
        ("triangle_diag", 4_000, 0.01),
    ]

    for kernel, n, p in cases:
        g = random_graph(n, p, seed=42, directed=kernel == "neumann")
        indptr, indices, data = g.adjacency()
        nnz = data.shape[0]
        v = np.ones(n)

        if kernel == "csr_matvec":
            fn_nb = _kernels.csr_matvec_numba
            fn_np = _kernels.csr_matvec_numpy
            call = (indptr, indices, data, v)
        elif kernel == "neumann":
            # a stiff resolvent solve: many hundreds of inner iterations
            row_sums = np.add.reduceat(data, indptr[:-1])
            alpha = 0.98 / float(row_sums.max())
            fn_nb = _kernels.neumann_numba
            fn_np = _kernels.neumann_numpy
            call = (indptr, indices, data, v, alpha, 1e-10, 200_000)
        else:
            fn_nb = _kernels.triangle_diag_numba
            fn_np = _kernels.triangle_diag_numpy
            call = (indptr, indices, data)

        fn_nb(*call)  # JIT warmup outside the timed region
        t_nb = best_of(fn_nb, call, args.repeat)
        t_np = best_of(fn_np, call, args.repeat)
        print(f"{kernel:<16} {n:>6} {nnz:>9} "
              f"{t_nb * 1e3:>11.3f} {t_np * 1e3:>11.3f} "
              f"{t_np / t_nb:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallback.

Covers the two hot paths: the sparse matrix-vector product and a full
weighted l1 decode (dominated by simplex pivots).  Run directly:

    python benchmarks/backend_bench.py [--repeats 50]

The same selection is available process-wide via EXPWL1_BACKEND=numpy|numba.
"""

import argparse
import time

import numpy as np

from expwl1 import _kernels, graphs
from expwl1.decode import DecodeProblem, decode
from expwl1.weights import make_weights


def time_apply(repeats):
    A = graphs.generate(4096, 1024, 24, 7)
    z = np.random.default_rng(0).standard_normal(4096)
    graphs.apply(A, z)   # warm up (jit compile on the numba backend)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        graphs.apply(A, z)
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def time_decode(repeats):
    N, m, d = 256, 64, 12
    om = make_weights("polynomial", N, alpha=0.4)
    rng = np.random.default_rng(1)
    A = graphs.generate(N, m, d, 3)
    x = np.zeros(N)
    x[rng.choice(N, size=6, replace=False)] = rng.standard_normal(6)
    e = rng.standard_normal(m)
    e *= 1e-6 / np.linalg.norm(e)
    y = graphs.apply(A, x) + e
    prob = DecodeProblem(A=A, y=y, omega=om, eta=float(np.abs(e).sum()))
    decode(prob)         # warm up
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        decode(prob)
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=30)
    args = parser.parse_args()

    rows = {}
    for backend in ("numpy", "numba"):
        try:
            _kernels.set_backend(backend)
        except ImportError:
            print(f"{backend:>6}: unavailable")
            continue
        rows[backend] = (time_apply(args.repeats), time_decode(max(3, args.repeats // 6)))
        print(f"{backend:>6}: apply {rows[backend][0] * 1e6:9.1f} us   "
              f"decode {rows[backend][1] * 1e3:9.2f} ms")
    if len(rows) == 2:
        print(f"numba speedup: apply {rows['numpy'][0] / rows['numba'][0]:.2f}x, "
              f"decode {rows['numpy'][1] / rows['numba'][1]:.2f}x")


if __name__ == "__main__":
    main()

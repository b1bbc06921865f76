"""Benchmark the Aberth-Ehrlich kernel: numba @njit build vs the pure-numpy
fallback (PLANEJAC_NO_JIT=1).

Run both backends from one shell:

    python benchmarks/bench_roots.py
    PLANEJAC_NO_JIT=1 python benchmarks/bench_roots.py
"""

import random
import time

import numpy as np

from planejac import _kernels
from planejac.roots import find_roots


def bench(degree, n_polys, seed=12345):
    rng = random.Random(seed)
    polys = []
    for _ in range(n_polys):
        coeffs = [complex(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(degree + 1)]
        coeffs[0] = coeffs[0] if abs(coeffs[0]) > 0.5 else 1.0 + 0j
        polys.append(coeffs)
    # warm-up (jit compilation happens here, outside the timed region)
    find_roots(polys[0])
    t0 = time.perf_counter()
    total = 0
    for c in polys:
        total += len(find_roots(c))
    dt = time.perf_counter() - t0
    return dt, total


def main():
    print(f"backend: {_kernels.BACKEND}")
    for degree, n in ((4, 2000), (16, 500), (40, 100), (64, 50)):
        dt, total = bench(degree, n)
        print(f"degree {degree:3d}: {n:5d} solves in {dt:8.3f} s "
              f"({1e3 * dt / n:7.3f} ms/solve, {total} roots)")


if __name__ == "__main__":
    main()

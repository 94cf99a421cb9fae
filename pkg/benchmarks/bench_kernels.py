#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import statistics
import sys
import time

from polyperm import _kernels_py
from polyperm.gen import random_polystochastic
from polyperm.latin import z_matrix
from polyperm.matrix import MultiDimMatrix

try:
    from polyperm import _speedups
except ImportError:
    _speedups = None


def timeit(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return min(samples), statistics.median(samples)


def build_cases():
    dense44 = MultiDimMatrix.constant(4, 4, 0.25, "float")
    z54 = z_matrix(5, 4)
    z36 = z_matrix(3, 6)
    rng = random.Random(0)
    sparse_batch = [
        random_polystochastic(4, 4, 1 + rng.randrange(4), seed).support()
        for seed in range(300)
    ]
    dense_sup = dense44.support()
    float_entries = [rng.random() for _ in range(4 ** 4)]
    return [
        (
            "count dense 4d order4 (13824 diagonals)",
            lambda impl: impl.count_positive_diagonals(dense_sup, 4, 4),
        ),
        (
            "count z-support 5d order4 (331776 diagonals)",
            lambda impl: impl.count_positive_diagonals(z54.support(), 5, 4),
        ),
        (
            "count z-support 3d order6",
            lambda impl: impl.count_positive_diagonals(z36.support(), 3, 6),
        ),
        (
            "find over 300 random sparse supports",
            lambda impl: [impl.find_positive_diagonal(s, 4, 4) for s in sparse_batch],
        ),
        (
            "permanent_float dense 4d order4",
            lambda impl: impl.permanent_float(float_entries, 4, 4),
        ),
    ]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _speedups is None:
        print("compiled extension not built; showing pure-Python timings only")
    cases = build_cases()
    width = max(len(name) for name, _ in cases)
    header = f"{'case':<{width}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, runner in cases:
        py_best, _ = timeit(lambda: runner(_kernels_py), args.repeat)
        if _speedups is not None:
            c_best, _ = timeit(lambda: runner(_speedups), args.repeat)
            ratio = py_best / c_best if c_best > 0 else float("inf")
            print(f"{name:<{width}}  {py_best * 1e3:>8.2f}ms  {c_best * 1e3:>8.2f}ms  {ratio:>7.1f}x")
        else:
            print(f"{name:<{width}}  {py_best * 1e3:>8.2f}ms  {'-':>10}  {'-':>8}")
    # cross-check once: both backends must agree
    if _speedups is not None:
        z = z_matrix(5, 4).support()
        assert _speedups.count_positive_diagonals(z, 5, 4) == _kernels_py.count_positive_diagonals(z, 5, 4)
        print("\nbackends agree on the z-support count")
    return 0


if __name__ == "__main__":
    sys.exit(main())

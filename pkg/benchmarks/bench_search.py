#!/usr/bin/env python3
"""Benchmark the search kernel backends (numba JIT vs pure numpy).

Times the full offset scan over a box for each backend, after a warm-up
pass so numba's compilation cost is reported separately.

    python benchmarks/bench_search.py --amax 1200 --cmax 27 --repeat 3
"""

import argparse
import time

from closefact._kernels import numba_available, offset_scan


def time_backend(backend, a_max, c_max, repeat):
    t0 = time.perf_counter()
    hits = offset_scan(1, a_max + 1, c_max, backend=backend)
    warmup = time.perf_counter() - t0
    best = min(
        timed(lambda: offset_scan(1, a_max + 1, c_max, backend=backend))
        for _ in range(repeat)
    )
    return warmup, best, len(hits)


def timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--amax", type=int, default=1200)
    ap.add_argument("--cmax", type=int, default=27)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    inner_iters = args.amax * (args.amax + 1) // 2 * args.cmax
    print(f"box: a_max={args.amax} c_max={args.cmax}  (~{inner_iters:,} inner iterations)")
    print(f"{'backend':8} {'warmup':>9} {'best':>9} {'iters/s':>12} {'hits':>8}")

    results = {}
    backends = ["numpy"] + (["numba"] if numba_available() else [])
    for backend in backends:
        warmup, best, hits = time_backend(backend, args.amax, args.cmax, args.repeat)
        results[backend] = best
        print(f"{backend:8} {warmup:8.3f}s {best:8.3f}s {inner_iters / best:12,.0f} {hits:8}")

    if "numba" in results:
        print(f"\nnumba speedup over numpy: {results['numpy'] / results['numba']:.1f}x")
    else:
        print("\nnumba not installed; only the numpy path was timed")


if __name__ == "__main__":
    main()

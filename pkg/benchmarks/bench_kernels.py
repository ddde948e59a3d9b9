#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python fallback.

Runs the three hot loops on both backends, checks they produce identical
results, and prints a timing table.

Usage: python benchmarks/bench_kernels.py [--samples N] [--repeat R]
"""

import argparse
import time

import numpy as np

from anticonc import kernels
from anticonc.groups import make_cyclic, make_symmetric
from anticonc.search import _gather_arrays, any_pair_vars, symmetric_pair_vars


def time_call(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_sample_walk(backend, samples):
    g = make_cyclic(7)
    cols_a = np.ascontiguousarray(np.stack([g.table[:, 1]] * 10))
    cols_b = np.ascontiguousarray(np.stack([g.table[:, 6]] * 10))

    def run():
        out = np.zeros(g.size, dtype=np.int64)
        backend.sample_walk_counts(cols_a, cols_b, g.identity, 42, 0, samples, out)
        return out

    return run


def bench_matrix_walk(backend, samples):
    mats_a = np.ascontiguousarray(np.array([[2, 1, 0, 2]] * 8, dtype=np.int64))
    mats_b = np.ascontiguousarray(np.array([[51, 0, 1, 51]] * 8, dtype=np.int64))

    def run():
        return backend.sample_matrix_walk(101, mats_a, mats_b, 7, 0, samples)

    return run


def bench_search_abelian(backend):
    g = make_cyclic(9)
    vars = any_pair_vars(g)  # 36 vars, C(39, 4) = 82251 laws
    ga, gb = _gather_arrays(g, vars)

    def run():
        return backend.search_max_topk(ga, gb, g.identity, 4, 2, False, 0, len(vars))

    return run


def bench_search_nonabelian(backend):
    g = make_symmetric(4)
    vars = symmetric_pair_vars(g, 3)  # 7 pairs of 3- and 4-cycles: 7^5 ordered laws
    ga, gb = _gather_arrays(g, vars)

    def run():
        return backend.search_max_topk(ga, gb, g.identity, 5, 1, True, 0, len(vars))

    return run


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=2_000_000)
    parser.add_argument("--matrix-samples", type=int, default=300_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = {name: kernels.get_backend(name) for name in kernels.available_backends()}
    if "ext" not in backends:
        print("note: compiled kernel not built; benchmarking the pure backend only")

    cases = [
        ("walk sampler (Z7, 10 factors)", lambda b: bench_sample_walk(b, args.samples), args.samples),
        ("matrix sampler (GL2(101), 8 factors)", lambda b: bench_matrix_walk(b, args.matrix_samples), args.matrix_samples),
        ("search, multisets (Z9 any-pairs, n=4)", bench_search_abelian, 82251),
        ("search, sequences (S4 symmetric, n=5)", bench_search_nonabelian, 16807),
    ]

    print(f"{'case':<42} {'backend':<8} {'work':>10} {'seconds':>9} {'per-sec':>12} {'speedup':>8}")
    for label, make, work in cases:
        timings = {}
        results = {}
        for name, backend in backends.items():
            seconds, result = time_call(make(backend), args.repeat)
            timings[name] = seconds
            results[name] = result
        if len(results) == 2:
            pv, ev = results["pure"], results["ext"]
            same = np.array_equal(pv, ev) if isinstance(pv, np.ndarray) else pv == ev
            assert same, f"backend mismatch in {label}"
        base = timings.get("pure")
        for name in backends:
            seconds = timings[name]
            speedup = f"{base / seconds:7.1f}x" if name == "ext" and base else "       -"
            print(f"{label:<42} {name:<8} {work:>10} {seconds:>9.4f} {work / seconds:>12.0f} {speedup:>8}")


if __name__ == "__main__":
    main()

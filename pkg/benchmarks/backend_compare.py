#!/usr/bin/env python3
"""Compare the JIT-compiled kernel against the pure-numpy fallback.

Runs the consistency engine and the full optimality pipeline on generated
instances under both backends, checks that results agree exactly, and
reports wall times and speedups.

Usage::

    python benchmarks/backend_compare.py [--seed N] [--alts M]
"""

from __future__ import annotations

import argparse
import time

from lexpref import GenConfig, compute_sets, consistent, gen_instance
from lexpref.kernel import HAS_NUMBA, warm_up

CELLS = [(50, 100, 3), (100, 200, 3), (200, 500, 2), (200, 1000, 2)]
OPT_CELLS = [(20, 50, 50, 3), (50, 100, 100, 2)]


def time_consistency(gen, backend: str, reps: int) -> float:
    best = float("inf")
    for _ in range(reps):
        start = time.perf_counter()
        res = consistent(gen.space, gen.gamma, kernel=backend, verify=False)
        best = min(best, time.perf_counter() - start)
        assert res.consistent
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--alts", type=int, default=100)
    args = parser.parse_args()

    if not HAS_NUMBA:
        print("numba is not installed; nothing to compare")
        return 1
    warm_up()

    print(f"{'consistency':<24}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for n, g, reps in CELLS:
        gen = gen_instance(GenConfig(n=n, g=g, m=1, seed=args.seed))
        t_numba = time_consistency(gen, "numba", reps)
        t_numpy = time_consistency(gen, "numpy", reps)
        a = consistent(gen.space, gen.gamma, kernel="numba", verify=False)
        b = consistent(gen.space, gen.gamma, kernel="numpy", verify=False)
        assert a.witness == b.witness and a.test_count == b.test_count
        print(f"n={n:<5} g={g:<13}{t_numba * 1e3:>10.1f}ms"
              f"{t_numpy * 1e3:>10.1f}ms{t_numpy / t_numba:>9.1f}x")

    print(f"\n{'optimal sets':<24}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for n, g, m, reps in OPT_CELLS:
        m = min(m, args.alts)
        gen = gen_instance(GenConfig(n=n, g=g, m=m, seed=args.seed))
        times = {}
        results = {}
        for backend in ("numba", "numpy"):
            best = float("inf")
            for _ in range(reps):
                start = time.perf_counter()
                results[backend] = compute_sets(gen.space, gen.gamma,
                                                gen.alternatives,
                                                kernel=backend)
                best = min(best, time.perf_counter() - start)
            times[backend] = best
        assert results["numba"] == results["numpy"]
        print(f"n={n:<3} g={g:<5} m={m:<7}{times['numba'] * 1e3:>10.1f}ms"
              f"{times['numpy'] * 1e3:>10.1f}ms"
              f"{times['numpy'] / times['numba']:>9.1f}x")
    print("\nbackends agree on every instance")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

#!/usr/bin/env python3
"""Time the numba kernels against the numpy fallback on full table scans.

The rule is a responsive priority rule, which satisfies every axiom, so each
scan visits every pair instead of stopping at an early violation.

    python3 benchmarks/bench_kernels.py --sizes 10 12 13 --repeat 3
"""
import argparse
import time

import numpy as np

from combchoice import _kernels as K
from combchoice.core import GroundSet
from combchoice.generators import random_order
from combchoice.rules import priority_max

PAIR_CODES = {"subs": K.SUBS, "ire": K.IRE, "pi": K.PI, "subadd": K.SUBADD}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench(n, repeat, rng):
    g = GroundSet(tuple(f"e{i}" for i in range(n)))
    C = priority_max(max(1, n // 2), random_order(g.elements, rng), g).compiled()
    t = C.table
    rows = []
    for name, code in PAIR_CODES.items():
        fast, a = best_of(lambda: K.scan_pairs_numba(t, n, code), repeat)
        slow, b = best_of(lambda: K.scan_pairs_numpy(t, n, code), repeat)
        assert a == b, (name, a, b)
        rows.append((name, fast, slow))
    fast, a = best_of(lambda: K.size_mono_step_numba(t, n), repeat)
    slow, b = best_of(lambda: K.size_mono_step_numpy(t, n), repeat)
    assert a == b
    rows.append(("size_mono", fast, slow))
    fast, a = best_of(lambda: K.revealed_priority_numba(t, n), repeat)
    slow, b = best_of(lambda: K.revealed_priority_numpy(t, n), repeat)
    assert np.array_equal(a, b)
    rows.append(("revealed", fast, slow))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 12, 13])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not K.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed")
    rng = np.random.default_rng(args.seed)
    # compile once so the first timing is not the compiler
    bench(3, 1, rng)
    print(f"{'n':>3} {'kernel':<10} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for n in args.sizes:
        for name, fast, slow in bench(n, args.repeat, rng):
            print(f"{n:>3} {name:<10} {fast:>10.4f} {slow:>10.4f} {slow / max(fast, 1e-9):>7.1f}x")


if __name__ == "__main__":
    main()

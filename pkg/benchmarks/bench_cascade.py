"""Time the compiled cascade kernel against the pure-Python twin.

The two kernels are required to produce bit-identical trial counts; this
script checks that while measuring the speedup.

    python3 benchmarks/bench_cascade.py --trials 100000 --alpha-d 3
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fermidet import _cascade_py

try:
    from fermidet import _cascade
except ImportError:
    _cascade = None


def _time(kernel, alpha, gap, trials, seed, repeats):
    best = float("inf")
    counts = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        counts = kernel.cascade_counts(alpha, gap, 1, seed, 0, trials)
        best = min(best, time.perf_counter() - t0)
    return best, counts


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--alpha-d", type=float, default=3.0, dest="alpha_d")
    ap.add_argument("--seed", type=int, default=12345)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    alpha, gap = args.alpha_d, 1.0
    print(f"cascade benchmark: {args.trials} trials, alpha*gap = {args.alpha_d}, "
          f"seed = {args.seed}")

    t_py, counts_py = _time(_cascade_py, alpha, gap, args.trials, args.seed, args.repeats)
    rate_py = args.trials / t_py
    print(f"  pure-python: {t_py:8.3f} s  ({rate_py:10.0f} trials/s)  "
          f"mean gain {counts_py.mean():.4f}")

    if _cascade is None:
        print("  compiled:    not built (pip install -e . --no-build-isolation)")
        return 0

    t_c, counts_c = _time(_cascade, alpha, gap, args.trials, args.seed, args.repeats)
    rate_c = args.trials / t_c
    print(f"  compiled:    {t_c:8.3f} s  ({rate_c:10.0f} trials/s)  "
          f"mean gain {counts_c.mean():.4f}")
    identical = np.array_equal(counts_py, counts_c)
    print(f"  speedup:     {t_py / t_c:.1f}x   bit-identical counts: {identical}")
    if not identical:
        print("  ERROR: backends disagree")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

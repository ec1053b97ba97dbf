"""Fit the mean random-game length from _0(n) against n.

    python3 scripts/mean_slope.py --lo 100 --hi 1000 --step 100 --trials 200
"""

import argparse

from bergman.montecarlo import DEFAULT_SEED, mean_slope


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=int, default=100)
    ap.add_argument("--hi", type=int, default=1000)
    ap.add_argument("--step", type=int, default=100)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    ns = range(args.lo, args.hi + 1, args.step)
    slope, intercept, r2 = mean_slope(ns, args.trials, args.seed, threads=args.threads)
    print(f"slope {slope:.4f}  intercept {intercept:.2f}  r^2 {r2:.6f}  ({len(ns)} values of n)")


if __name__ == "__main__":
    main()

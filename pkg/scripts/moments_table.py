"""Standardized moments of random-game lengths from _0(n).

    python3 scripts/moments_table.py --n 500 1000 --trials 5000 [--seed 42] [--threads 4]
"""

import argparse

from bergman.montecarlo import DEFAULT_SEED, MOMENT_ORDERS, simulate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[500])
    ap.add_argument("--trials", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    print("n\tmean\tvariance\t" + "\t".join(f"m{p}" for p in MOMENT_ORDERS))
    for n in args.n:
        s = simulate(n, args.trials, args.seed, threads=args.threads)
        cols = [f"{s.std_moments[p]:.4f}" for p in MOMENT_ORDERS]
        print(f"{n}\t{s.mean:.2f}\t{s.variance:.2f}\t" + "\t".join(cols))


if __name__ == "__main__":
    main()

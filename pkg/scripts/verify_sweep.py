"""Check every bound report on SLCR and SLCL games from _0(n) over a range of n.

    python3 scripts/verify_sweep.py --lo 20 --hi 300 [--step 1] [--out sweep.json]
"""

import argparse
import json
import time

from bergman.bounds import check_trace, violated
from bergman.recurrence import BERGMAN
from bergman.state import single
from bergman.strategies import SLCL, SLCR, play


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=int, default=20)
    ap.add_argument("--hi", type=int, default=300)
    ap.add_argument("--step", type=int, default=1)
    ap.add_argument("--out")
    args = ap.parse_args()

    rows, failures = [], 0
    t0 = time.perf_counter()
    for n in range(args.lo, args.hi + 1, args.step):
        for strategy in (SLCR, SLCL):
            trace = play(single(0, n), strategy, BERGMAN)
            bad = [r.name for r in violated(check_trace(trace, BERGMAN))]
            failures += bool(bad)
            rows.append({"n": n, "strategy": strategy.name, "length": trace.length,
                         "splits": trace.splits, "min_left": trace.min_left, "violated": bad})
            if bad:
                print(f"n={n} {strategy.name}: violated {','.join(bad)}")
    print(f"{len(rows)} games, {failures} with violations, {time.perf_counter() - t0:.1f}s")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=1)
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())

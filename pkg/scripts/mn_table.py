"""Brute-force m_n next to phi^(-2n).

    python3 scripts/mn_table.py --max-n 6
"""

import argparse
import time

from bergman.mn_oracle import brute_force_mn, mn_closed_form, prepped_state
from bergman.state import format_state


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    for n in range(args.max_n + 1):
        t0 = time.perf_counter()
        value, witness = brute_force_mn(n, 2 * n + 20, workers=args.workers)
        err = abs(value - mn_closed_form(n))
        tag = "prepped" if witness == prepped_state(n) else format_state(witness)
        print(f"n={n}  m_n={value:.12g}  |err|={err:.1e}  witness {tag}  {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()

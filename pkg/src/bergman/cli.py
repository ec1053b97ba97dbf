"""Command-line entry point.

    bergman play --rec 1,1 --state "_0(100)" --strategy slcr --out trace.json
    bergman simulate --n 500 --trials 5000 --seed 42 --csv out.csv --hist hist.csv --stats stats.json
    bergman verify --n-range 20:300 --strategies slcr,slcl,qt,random --seed 7 --out reports.json
    bergman expand --n 2021
    bergman mn --n 4 --window 28
    bergman ldm-check --moves set.json

Exit codes: 0 success, 1 a bound report was violated, 2 usage error,
3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import bounds, montecarlo
from .errors import BergmanError, InvariantError, LimitExceeded
from .expansion import expand_integer, expansion_indices, greedy_expand
from .ldm import RandomChooser, check_termination, generic_play, load_move_set
from .mn_oracle import brute_force_mn, mn_closed_form, prepped_check, prepped_state
from .recurrence import Recurrence, new_recurrence, parse_coeffs
from .state import exact_value, format_state, parse_state, single
from .strategies import STRATEGY_NAMES, parse_strategy, play, trial_seed

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text + "\n")


def parse_range(text: str) -> list[int]:
    """``a:b[:step]``, inclusive of ``b``."""
    parts = text.split(":")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected a:b[:step]") from None
    if len(nums) == 1:
        return nums
    if len(nums) not in (2, 3) or (len(nums) == 3 and nums[2] < 1) or nums[1] < nums[0]:
        raise UsageError(f"bad range {text!r}; expected a:b[:step]")
    step = nums[2] if len(nums) == 3 else 1
    return list(range(nums[0], nums[1] + 1, step))


# -- subcommands ----------------------------------------------------------


def cmd_play(args, rec: Recurrence) -> int:
    S = parse_state(args.state)
    strategy = parse_strategy(args.strategy, args.seed)
    trace = play(S, strategy, rec, move_limit=args.move_limit)
    text = trace.to_json()
    _write(args.out, text)
    if args.json:
        print(text)
    else:
        print(f"strategy {trace.strategy}: {trace.length} moves "
              f"({trace.combines} combines, {trace.splits} splits), winner player {trace.winner}")
        print(f"final {format_state(trace.final)}  min_left {trace.min_left}  max_right {trace.max_right}")
    return EXIT_OK


def cmd_simulate(args, rec: Recurrence) -> int:
    stats = montecarlo.simulate(args.n, args.trials, args.seed, rec, args.threads)
    if args.csv:
        montecarlo.export_csv(stats, args.csv)
    if args.hist:
        montecarlo.export_histogram(stats, args.hist)
    _write(args.stats, stats.to_json())
    if args.json:
        print(stats.to_json())
    else:
        print(f"n={stats.n} trials={stats.trials} mean={stats.mean:.4f} variance={stats.variance:.4f}")
        print("standardized moments " + " ".join(
            f"{p}:{v:.4f}" for p, v in stats.std_moments.items()))
    return EXIT_OK


def _verify_one(n: int, name: str, seed: int, coeffs: tuple, selection) -> dict:
    rec = new_recurrence(coeffs)
    strategy = parse_strategy(name, trial_seed(seed, n))
    trace = play(single(0, n), strategy, rec)
    reports = bounds.check_trace(trace, rec, selection)
    return {"n": n, "strategy": name, "length": trace.length,
            "reports": [r.to_dict() for r in reports],
            "violated": [r.name for r in bounds.violated(reports)]}


def cmd_verify(args, rec: Recurrence) -> int:
    ns = parse_range(args.n_range)
    names = [s.strip() for s in args.strategies.split(",") if s.strip()]
    for s in names:
        if s not in STRATEGY_NAMES:
            raise UsageError(f"unknown strategy {s!r}")
    if "qt" in names and not rec.is_bergman:
        raise UsageError("qt needs --rec 1,1")
    selection = args.reports.split(",") if args.reports else None
    jobs = [(n, s) for n in ns for s in names]
    threads = montecarlo.resolve_threads(args.threads)
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_verify_one, *zip(*[(n, s, args.seed, rec.coeffs, selection)
                                                         for n, s in jobs])))
    else:
        results = [_verify_one(n, s, args.seed, rec.coeffs, selection) for n, s in jobs]
    bad = [r for r in results if r["violated"]]
    doc = {"rec": list(rec.coeffs), "seed": args.seed, "results": results, "all_satisfied": not bad}
    _write(args.out, _dump(doc))
    if args.json:
        print(_dump(doc))
    else:
        for r in results:
            status = "ok" if not r["violated"] else "VIOLATED " + ",".join(r["violated"])
            print(f"n={r['n']:<5} {r['strategy']:<7} length={r['length']:<8} {status}")
        print(f"{len(results) - len(bad)}/{len(results)} runs satisfied every bound")
    return EXIT_VIOLATED if bad else EXIT_OK


def cmd_expand(args, rec: Recurrence) -> int:
    if (args.n is None) == (args.state is None):
        raise UsageError("give exactly one of --n or --state")
    if args.n is not None:
        E = expand_integer(args.n, rec)
    else:
        E = greedy_expand(exact_value(parse_state(args.state), rec), rec)
    idx = expansion_indices(E)
    if args.json:
        print(_dump({"indices": idx, "state": format_state(E)}))
    else:
        print(",".join(map(str, idx)))
        print(format_state(E))
    return EXIT_OK


def cmd_mn(args, rec: Recurrence) -> int:
    if not rec.is_bergman:
        raise UsageError("mn is defined for --rec 1,1 only")
    window = 2 * args.n + 20 if args.window is None else args.window
    value, witness = brute_force_mn(args.n, window, workers=montecarlo.resolve_threads(args.threads))
    doc = {
        "n": args.n,
        "window": window,
        "closed_form": mn_closed_form(args.n),
        "brute_force": value,
        "witness": format_state(witness),
        "witness_is_prepped": witness == prepped_state(args.n),
        "exact_check": prepped_check(args.n),
    }
    if args.json:
        print(_dump(doc))
    else:
        print(f"closed form  {doc['closed_form']!r}")
        print(f"brute force  {doc['brute_force']!r}  (window [0, {window}])")
        print(f"witness      {doc['witness']}  prepped={doc['witness_is_prepped']}")
        print(f"exact check  {doc['exact_check']}")
    if not doc["exact_check"]:
        raise InvariantError("exact identity for the prepped state failed")
    return EXIT_OK


def cmd_ldm_check(args, rec: Recurrence) -> int:
    ms = load_move_set(args.moves)
    verdict = check_termination(ms)
    doc = {"verdict": verdict.to_dict(), "max_chips": ms.max_chips, "g_M": ms.g_M}
    if args.state:
        try:
            trace = generic_play(parse_state(args.state), ms, RandomChooser(args.seed), args.limit)
            doc["play"] = trace.to_dict()
        except LimitExceeded as exc:
            doc["play"] = {"limit_reached": args.limit, "partial_length": exc.trace.length}
    if args.json:
        print(_dump(doc))
    else:
        print(f"{verdict.status}" + (f" ({verdict.direction}); bound {verdict.bound_formula}"
                                     if verdict.terminates else f": {verdict.reason}"))
        if "play" in doc:
            p = doc["play"]
            print(f"play: {p['length']} moves" if "length" in p else f"play: limit {args.limit} reached")
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rec", default="1,1", help="comma-separated coefficients c_1,...,c_k")
    common.add_argument("--seed", type=int, default=montecarlo.DEFAULT_SEED)
    common.add_argument("--json", action="store_true", help="structured output on stdout")
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes (default $BERGMAN_THREADS or 1)")

    p = argparse.ArgumentParser(prog="bergman", description="Generalized Bergman Game toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("play", parents=[common], help="play one game")
    s.add_argument("--state", required=True, help='"_0(100)" or JSON {"offset":..,"counts":[..]}')
    s.add_argument("--strategy", default="slcr", choices=STRATEGY_NAMES)
    s.add_argument("--move-limit", type=int, default=None)
    s.add_argument("--out")
    s.set_defaults(func=cmd_play)

    s = sub.add_parser("simulate", parents=[common], help="random games from _0(n)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--csv")
    s.add_argument("--hist")
    s.add_argument("--stats")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("verify", parents=[common], help="check bound formulas on games from _0(n)")
    s.add_argument("--n-range", required=True, help="a:b[:step]")
    s.add_argument("--strategies", default="slcr")
    s.add_argument("--reports", default=None, help="comma-separated report names (default all)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("expand", parents=[common], help="greedy base-beta expansion")
    s.add_argument("--n", type=int)
    s.add_argument("--state")
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("mn", parents=[common], help="m_n closed form against brute force")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--window", type=int, default=None)
    s.set_defaults(func=cmd_mn)

    s = sub.add_parser("ldm-check", parents=[common], help="classify a move set")
    s.add_argument("--moves", required=True)
    s.add_argument("--state", help="optionally play from this state")
    s.add_argument("--limit", type=int, default=100_000)
    s.set_defaults(func=cmd_ldm_check)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rec = parse_coeffs(args.rec)
        return args.func(args, rec)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvariantError, LimitExceeded) as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (BergmanError, ValueError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

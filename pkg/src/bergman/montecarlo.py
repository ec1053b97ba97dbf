"""Random-game simulation: per-trial records, moments, histograms, mean fits."""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Sequence

import numpy as np

from .recurrence import BERGMAN, Recurrence, new_recurrence
from .state import single
from .strategies import RandomPlay, play, trial_seed

CSV_HEADER = ("trial", "seed", "n", "moves", "combines", "splits", "min_left", "max_right")
HIST_HEADER = ("bin_lo", "bin_hi", "count")
MOMENT_ORDERS = range(3, 9)
GAUSSIAN_MOMENTS = {3: 0.0, 4: 3.0, 5: 0.0, 6: 15.0, 7: 0.0, 8: 105.0}
DEFAULT_SEED = 42


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    n: int
    moves: int
    combines: int
    splits: int
    min_left: int
    max_right: int


class PowerSums:
    """Exact integer sums of ``x^p`` for ``p <= 8``; merging is plain addition."""

    def __init__(self, order: int = 8):
        self.sums = [0] * (order + 1)

    def add(self, x: int) -> None:
        p = 1
        for j in range(len(self.sums)):
            self.sums[j] += p
            p *= x

    def merge(self, other: "PowerSums") -> None:
        self.sums = [a + b for a, b in zip(self.sums, other.sums)]

    @property
    def count(self) -> int:
        return self.sums[0]

    def central(self, p: int) -> Fraction:
        """Population central moment of order ``p``, exactly."""
        N = self.count
        mu = Fraction(self.sums[1], N)
        return sum(comb(p, j) * Fraction(self.sums[j], N) * (-mu) ** (p - j) for j in range(p + 1))


@dataclass
class SimulationConfig:
    n: int
    trials: int
    base_seed: int = DEFAULT_SEED
    coeffs: tuple[int, ...] = (1, 1)
    threads: int = 1

    def run(self) -> "SimulationStats":
        return simulate(self.n, self.trials, self.base_seed, new_recurrence(self.coeffs), self.threads)


@dataclass
class SimulationStats:
    n: int
    trials: int
    records: list[TrialRecord]
    mean: float
    variance: float
    std_moments: dict[int, float]
    hist_edges: list[float]
    hist_counts: list[int]
    # set when the sample is too small for standardized moments
    degenerate: bool = False
    base_seed: int | None = None
    coeffs: tuple[int, ...] = (1, 1)
    sums: PowerSums = field(default_factory=PowerSums, repr=False)

    @property
    def lengths(self) -> list[int]:
        return [r.moves for r in self.records]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "base_seed": self.base_seed,
            "rec": list(self.coeffs),
            "mean": self.mean,
            "variance": self.variance,
            "std_moments": {str(p): v for p, v in self.std_moments.items()},
            "degenerate": self.degenerate,
            "min_length": min(self.lengths, default=None),
            "max_length": max(self.lengths, default=None),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _run_trials(n: int, trials: Sequence[int], base_seed: int, coeffs: tuple[int, ...]) -> list[TrialRecord]:
    rec = BERGMAN if tuple(coeffs) == (1, 1) else new_recurrence(coeffs)
    start = single(0, n)
    out = []
    for t in trials:
        seed = trial_seed(base_seed, t)
        tr = play(start, RandomPlay(seed), rec, record=False)
        out.append(TrialRecord(t, seed, n, tr.length, tr.combines, tr.splits, tr.min_left, tr.max_right))
    return out


def resolve_threads(threads: int | None) -> int:
    """``threads`` if given, else ``$BERGMAN_THREADS``, else 1."""
    if threads is None:
        threads = int(os.environ.get("BERGMAN_THREADS", "1"))
    return max(1, threads)


def stats_from_records(records: list[TrialRecord], n: int, base_seed: int | None = None,
                       coeffs: tuple[int, ...] = (1, 1)) -> SimulationStats:
    records = sorted(records, key=lambda r: r.trial)
    sums = PowerSums()
    for r in records:
        sums.add(r.moves)
    N = len(records)
    if N == 0:
        return SimulationStats(n, 0, [], 0.0, 0.0, {}, [], [], True, base_seed, tuple(coeffs), sums)
    mean = float(Fraction(sums.sums[1], N))
    m2 = sums.central(2)
    degenerate = N < 2 or m2 == 0
    if degenerate:
        moments = {p: 0.0 for p in MOMENT_ORDERS}
    else:
        sd = float(m2) ** 0.5
        moments = {p: float(sums.central(p)) / sd**p for p in MOMENT_ORDERS}
    edges, counts = histogram([r.moves for r in records])
    return SimulationStats(n, N, records, mean, float(m2), moments, edges, counts,
                           degenerate, base_seed, tuple(coeffs), sums)


def histogram(lengths: list[int]) -> tuple[list[float], list[int]]:
    """Freedman-Diaconis bins; a constant sample gets one unit-wide bin."""
    if not lengths:
        return [], []
    x = np.asarray(lengths, dtype=np.int64)
    if x.min() == x.max():
        v = float(x[0])
        return [v - 0.5, v + 0.5], [len(lengths)]
    counts, edges = np.histogram(x, bins="fd")
    return [float(e) for e in edges], [int(c) for c in counts]


def simulate(
    n: int,
    trials: int,
    base_seed: int = DEFAULT_SEED,
    rec: Recurrence = BERGMAN,
    threads: int | None = 1,
) -> SimulationStats:
    """Play ``trials`` uniform-random games from ``_0(n)``.

    Trial ``t`` is seeded from ``(base_seed, t)`` alone, so the result does
    not depend on ``threads``.
    """
    if n < 1 or trials < 1:
        raise ValueError("need n >= 1 and trials >= 1")
    threads = resolve_threads(threads)
    idx = list(range(trials))
    if threads == 1 or trials < 2 * threads:
        records = _run_trials(n, idx, base_seed, rec.coeffs)
    else:
        chunks = [idx[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(_run_trials, [n] * threads, chunks, [base_seed] * threads, [rec.coeffs] * threads)
            records = [r for part in parts for r in part]
    return stats_from_records(records, n, base_seed, rec.coeffs)


def fit_line(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float, float]:
    """Least squares ``y = slope x + intercept``; returns ``(slope, intercept, r_squared)``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(set(xs)) < 3:
        raise ValueError("need at least 3 distinct x values")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), r2


def mean_slope(
    n_values: Sequence[int],
    trials: int,
    base_seed: int = DEFAULT_SEED,
    rec: Recurrence = BERGMAN,
    threads: int | None = 1,
) -> tuple[float, float, float]:
    """Fit mean random-game length against ``n``; each ``n`` gets its own derived base seed."""
    means = [simulate(n, trials, trial_seed(base_seed, n), rec, threads).mean for n in n_values]
    return fit_line(list(n_values), means)


def export_csv(stats: SimulationStats, path: str | os.PathLike) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in stats.records:
            w.writerow([r.trial, r.seed, r.n, r.moves, r.combines, r.splits, r.min_left, r.max_right])


def export_histogram(stats: SimulationStats, path: str | os.PathLike) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HIST_HEADER)
        for lo, hi, c in zip(stats.hist_edges, stats.hist_edges[1:], stats.hist_counts):
            w.writerow([repr(lo), repr(hi), c])


def load_csv(path: str | os.PathLike) -> SimulationStats:
    """Rebuild statistics from a trial CSV written by :func:`export_csv`."""
    with open(Path(path), newline="") as fh:
        rows = list(csv.DictReader(fh))
    records = [TrialRecord(*(int(row[h]) for h in CSV_HEADER)) for row in rows]
    n = records[0].n if records else 0
    return stats_from_records(records, n)

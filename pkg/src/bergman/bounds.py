"""Closed-form game-length and left-reach bounds, and trace checkers.

``L`` below is ``log_phi n``.  Real-valued formulas are compared with the
measured integers directly, without any epsilon.
"""

from __future__ import annotations

import math
from bisect import bisect_left, insort
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .errors import BelowThreshold, NonIntegral
from .moves import COMBINE, Move, is_legal, move_deltas
from .recurrence import BERGMAN, Recurrence
from .state import GameState

BERGMAN_THRESHOLD = 20

# reports whose value depends on the unknown constant A
A_DEPENDENT = frozenset({"explicit_upper", "left_reach_general"})

ALL_REPORTS = (
    "replay",
    "combine_count",
    "monovariants",
    "qt_4n",
    "slcr_split_lb",
    "bergman_interval",
    "left_reach",
    "slcr_left_reach",
    "phase_one_edge",
    "explicit_upper",
    "left_reach_general",
)


@dataclass
class BoundReport:
    name: str
    formula_value: float
    measured: float
    satisfied: bool
    parameters: dict = field(default_factory=dict)

    @property
    def informational(self) -> bool:
        """True when the report rests on an assumed value of A."""
        p = self.parameters
        return self.name in A_DEPENDENT and not (p.get("A_supplied") or p.get("A_free"))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "formula_value": self.formula_value,
            "measured": self.measured,
            "satisfied": self.satisfied,
            "parameters": self.parameters,
        }


def _log_phi(n: float) -> float:
    return BERGMAN.log_beta(n)


def _require_threshold(n: int) -> None:
    if n < BERGMAN_THRESHOLD:
        raise BelowThreshold(f"formula holds for n >= {BERGMAN_THRESHOLD}, got n={n}")


# -- formulas -------------------------------------------------------------


def combine_count(S: GameState, S_final: GameState, rec: Recurrence) -> int:
    """Combines needed to go from ``S`` to ``S_final``; every combine removes ``C_0 - 1`` chips."""
    diff = S.chips - S_final.chips
    if diff < 0:
        raise NonIntegral(f"final state has more chips ({S_final.chips}) than the initial ({S.chips})")
    q, r = divmod(diff, rec.C0 - 1)
    if r:
        raise NonIntegral(f"chip difference {diff} is not a multiple of C_0 - 1 = {rec.C0 - 1}")
    return q


def slcr_split_lower_bound(n: int, rec: Recurrence) -> float:
    """Lower bound on the SLCR split count from ``_0(n)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    c1, k = rec.c(1), rec.k
    return n * (n - 2 * c1 * rec.log_beta(n) + 1) / (2 * (k - 1) * c1 * (rec.C0 - 1))


def bergman_longest_interval(n: int) -> tuple[float, float]:
    """Interval containing the length of the longest Bergman game from ``_0(n)``."""
    _require_threshold(n)
    L = _log_phi(n)
    lo = n * n - 6 * n - 3 * n * L + 5 * L + 2 * L * L - 1
    return lo, bergman_length_upper(n)


def bergman_length_upper(n: int) -> float:
    """``n^2 + 2n L + n``: no Bergman game from ``_0(n)`` is longer."""
    return n * n + 2 * n * _log_phi(n) + n


def bergman_left_bounds(n: int, strict: bool = True) -> tuple[float, float]:
    """``(2n + L + 2, 2n - 3L - 8)``: how far left of 0 games from ``_0(n)`` can reach.

    No game goes further left than the first value; SLCR reaches at least
    the second.  ``strict=False`` evaluates the formulas below the threshold.
    """
    if strict:
        _require_threshold(n)
    L = _log_phi(n)
    return 2 * n + L + 2, 2 * n - 3 * L - 8


def bound_iteration(n: int, J: int) -> tuple[float, float]:
    """``(L^(J), z^(J))`` after ``J`` rounds of bound iteration."""
    _require_threshold(n)
    if J < 2:
        raise ValueError("J must be >= 2")
    L = _log_phi(n)
    LJ = (2 - 1 / 2 ** (J - 1)) * n - (3 - 1 / 2 ** (J - 2)) * L - (7 - 3 / 2 ** (J - 2))
    return LJ, (LJ - L - 5) / 2


def bound_iteration_recursive(n: int, J: int) -> float:
    """``L^(J)`` from the recursion ``L^(j) = n + L^(j-1)/2 - 3L/2 - 7/2`` with ``L^(1) = n - L - 1``."""
    L = _log_phi(n)
    x = n - L - 1
    for _ in range(J - 1):
        x = n + x / 2 - 1.5 * L - 3.5
    return x


def bound_iteration_limit(n: int) -> float:
    return 2 * n - 3 * _log_phi(n) - 7


def explicit_length_upper(n: int, a: int, b: int, rec: Recurrence, A: float = 0.0) -> float:
    """Explicit upper bound on any game from a state with ``n`` chips inside ``[a, b]``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if b < a:
        raise ValueError("need b >= a")
    k, C0, C1, R = rec.k, rec.C0, rec.C1, rec.R
    w = b - a
    lin = 1 / (C0 - 1) + (2 * A + w * (R + 1)) / (C0 - 1) + (2 * C0 * R * w + 2 * C1 - k) / (2 * (C0 - 1) ** 2)
    return k / (2 * (C0 - 1) ** 2) * n * n + 2 / (C0 - 1) * n * rec.log_rho(n) + lin * n


def explicit_leading_coefficient(rec: Recurrence) -> float:
    """Coefficient of ``chips^2`` in the position-independent length bound."""
    k, C0, R = rec.k, rec.C0, rec.R
    base = ((R + 1) * (C0 - 1) + C0 * R) / (C0 - 1) ** 2
    return base * (2 * k / (C0 - 1) + k + 1) + k / (2 * (C0 - 1) ** 2)


def general_left_reach(S: GameState, rec: Recurrence, A: float = 0.0) -> float:
    """``-k chips/(C_0 - 1) - log_rho v(S) - A``, valid for states on non-negative indices."""
    v = sum(n * rec.beta**i for i, n in S.items())
    return -rec.k * S.chips / (rec.C0 - 1) - rec.log_rho(v) - A


def default_move_limit(S: GameState, rec: Recurrence) -> int:
    """Ten times a generous quadratic length bound; reaching it means a defect."""
    n = S.chips
    if n == 0:
        return 1
    explicit = explicit_length_upper(n, S.left, S.right, rec)
    return 10 * math.ceil(explicit + explicit_leading_coefficient(rec) * n * n) + 100


# -- trace analysis -----------------------------------------------------


class GapTracker:
    """Incrementally maintained maximum zero run between summands."""

    def __init__(self, S: GameState):
        self.cells = dict(S._cells)
        self.support = sorted(self.cells)
        self.gaps = Counter(b - a - 1 for a, b in zip(self.support, self.support[1:]))

    def max_gap(self) -> int:
        return max((g for g, c in self.gaps.items() if c), default=0)

    def _link(self, a, b, sign):
        g = b - a - 1
        self.gaps[g] += sign
        if not self.gaps[g]:
            del self.gaps[g]

    def bump(self, i: int, d: int) -> None:
        old = self.cells.get(i, 0)
        new = old + d
        sup = self.support
        if old == 0 and new > 0:
            pos = bisect_left(sup, i)
            a = sup[pos - 1] if pos > 0 else None
            b = sup[pos] if pos < len(sup) else None
            if a is not None and b is not None:
                self._link(a, b, -1)
            if a is not None:
                self._link(a, i, 1)
            if b is not None:
                self._link(i, b, 1)
            insort(sup, i)
        elif old > 0 and new == 0:
            pos = bisect_left(sup, i)
            a = sup[pos - 1] if pos > 0 else None
            b = sup[pos + 1] if pos + 1 < len(sup) else None
            if a is not None:
                self._link(a, i, -1)
            if b is not None:
                self._link(i, b, -1)
            if a is not None and b is not None:
                self._link(a, b, 1)
            del sup[pos]
        if new:
            self.cells[i] = new
        else:
            self.cells.pop(i, None)


@dataclass
class MonovariantViolation:
    step: int
    move: Move
    what: str


def monovariant_violations(initial: GameState, moves: Iterable[Move], rec: Recurrence) -> list[MonovariantViolation]:
    """Replay ``moves`` and check the per-move chip, index-sum and gap changes."""
    out: list[MonovariantViolation] = []
    state = initial.copy()
    gaps = GapTracker(initial)
    k, C0, C1 = rec.k, rec.C0, rec.C1
    g = gaps.max_gap()
    for t, m in enumerate(moves):
        if not is_legal(state, m, rec):
            out.append(MonovariantViolation(t, m, "illegal"))
            break
        chips0, ind0 = state.chips, state.index_sum
        for i, d in move_deltas(m, rec):
            state._bump(i, d)
            gaps.bump(i, d)
        dchips, dind = state.chips - chips0, state.index_sum - ind0
        g_new = gaps.max_gap()
        if m.kind is COMBINE:
            if dchips != -(C0 - 1):
                out.append(MonovariantViolation(t, m, f"chips changed by {dchips}"))
            if dind != -m.index * (C0 - 1) + C1:
                out.append(MonovariantViolation(t, m, f"index sum changed by {dind}"))
            if g_new > g + k:
                out.append(MonovariantViolation(t, m, f"gap grew {g} -> {g_new}"))
        else:
            if dchips != 0:
                out.append(MonovariantViolation(t, m, f"chips changed by {dchips}"))
            if dind != -m.p * (C0 - 1):
                out.append(MonovariantViolation(t, m, f"index sum changed by {dind}"))
            if max(g_new, k) > max(g, k):
                out.append(MonovariantViolation(t, m, f"gap grew {g} -> {g_new}"))
        g = g_new
    return out


def phase_one_end(trace, rec: Recurrence) -> GameState:
    """State just before the first combine of a recorded trace (the final state if there is none)."""
    state = trace.initial.copy()
    for m in trace.moves:
        if m.kind is COMBINE:
            break
        for i, d in move_deltas(m, rec):
            state._bump(i, d)
    return state


def left_edge_zeros(S: GameState) -> int:
    """Zeros in the longest prefix of the form ``1 1 0 (1 0)*`` read from the leftmost summand.

    Returns 0 when the state does not start with ``1 1 0``.
    """
    if S.is_empty():
        return 0
    a = S.left
    if (S.get(a), S.get(a + 1), S.get(a + 2)) != (1, 1, 0):
        return 0
    zeros, i = 1, a + 3
    while S.get(i) == 1 and S.get(i + 1) == 0:
        zeros += 1
        i += 2
    return zeros


def initial_pile(S: GameState) -> int | None:
    """``n`` when ``S`` is ``_0(n)``, otherwise None."""
    items = list(S.items())
    if len(items) == 1 and items[0][0] == 0:
        return items[0][1]
    return None


def _replay_final(trace, rec: Recurrence) -> GameState | None:
    state = trace.initial.copy()
    for m in trace.moves:
        if not is_legal(state, m, rec):
            return None
        for i, d in move_deltas(m, rec):
            state._bump(i, d)
    return state


def check_trace(
    trace,
    rec: Recurrence,
    selection: Iterable[str] | None = None,
    A: float | None = None,
) -> list[BoundReport]:
    """Evaluate every applicable bound in ``selection`` (default: all) against ``trace``.

    Reports that do not apply to the trace (wrong strategy, recurrence, or
    initial state) are skipped.  ``A`` defaults to 0 for the A-dependent
    reports, which are then marked informational.
    """
    wanted = set(ALL_REPORTS if selection is None else selection)
    unknown = wanted - set(ALL_REPORTS)
    if unknown:
        raise ValueError(f"unknown reports: {sorted(unknown)}")
    reports: list[BoundReport] = []
    n0 = initial_pile(trace.initial)
    chips = trace.initial.chips
    bergman = rec.is_bergman
    strat = trace.strategy
    recorded = trace.moves is not None
    A_params = {"A": 0.0 if A is None else A, "A_supplied": A is not None}

    def add(name, formula, measured, ok, **params):
        reports.append(BoundReport(name, float(formula), float(measured), bool(ok), params))

    if "replay" in wanted and recorded:
        final = _replay_final(trace, rec)
        ok = final is not None and final == trace.final and len(trace.moves) == trace.length
        add("replay", trace.length, len(trace.moves), ok)

    if "combine_count" in wanted:
        try:
            expected = combine_count(trace.initial, trace.final, rec)
        except NonIntegral:
            expected = -1
        measured = sum(m.kind is COMBINE for m in trace.moves) if recorded else trace.combines
        add("combine_count", expected, measured, expected == measured == trace.combines)

    if "monovariants" in wanted and recorded:
        bad = monovariant_violations(trace.initial, trace.moves, rec)
        add("monovariants", 0, len(bad), not bad,
            first=None if not bad else f"step {bad[0].step}: {bad[0].move} {bad[0].what}")

    if "qt_4n" in wanted and strat == "qt":
        add("qt_4n", 4 * chips, trace.length, trace.length <= 4 * chips, n=chips)

    if "slcr_split_lb" in wanted and strat == "slcr" and n0:
        lb = slcr_split_lower_bound(n0, rec)
        add("slcr_split_lb", lb, trace.splits, trace.splits >= lb, n=n0)

    if n0 and bergman and n0 >= BERGMAN_THRESHOLD:
        if "bergman_interval" in wanted and strat in ("slcr", "slcl"):
            lo, hi = bergman_longest_interval(n0)
            add("bergman_interval", hi, trace.length, lo <= trace.length <= hi, n=n0, lo=lo, hi=hi)
        reach, attained = bergman_left_bounds(n0)
        if "left_reach" in wanted:
            add("left_reach", -reach, trace.min_left, trace.min_left >= -reach, n=n0)
        if "slcr_left_reach" in wanted and strat == "slcr":
            add("slcr_left_reach", -attained, trace.min_left, trace.min_left <= -attained, n=n0)
        if "phase_one_edge" in wanted and strat == "slcr" and recorded:
            z = n0 - 2 * _log_phi(n0) - 7
            zeros = left_edge_zeros(phase_one_end(trace, rec))
            add("phase_one_edge", z, zeros, zeros >= z, n=n0)

    if "explicit_upper" in wanted and chips:
        if bergman and n0:
            bound = bergman_length_upper(n0)
            add("explicit_upper", bound, trace.length, trace.length <= bound, n=n0, A_free=True)
        else:
            a, b = trace.initial.left, trace.initial.right
            bound = explicit_length_upper(chips, a, b, rec, A_params["A"])
            add("explicit_upper", bound, trace.length, trace.length <= bound, n=chips, a=a, b=b, **A_params)

    if "left_reach_general" in wanted and chips and trace.initial.left >= 0:
        bound = general_left_reach(trace.initial, rec, A_params["A"])
        add("left_reach_general", bound, trace.min_left, trace.min_left >= bound, **A_params)

    return reports


def violated(reports: Iterable[BoundReport]) -> list[BoundReport]:
    """Failed reports that count: informational A-dependent ones are excluded."""
    return [r for r in reports if not r.satisfied and not r.informational]

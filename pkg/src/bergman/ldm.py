"""Locally defined moves: classification, a sufficient termination test, a generic runner.

An LDM replaces a sub-multiset ``m_i`` of the state by ``m_f``.  A move in a
translation class may be played at every shift of its patterns.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable

from .errors import LimitExceeded, OutOfWindow, ParseError
from .recurrence import BERGMAN, Recurrence
from .state import GameState, add, contains, max_gap, parse_state, shift, state_from_dict, state_to_dict, subtract
from .strategies import MoveSampler


class Mass(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    CONSERVATIVE = "conservative"


class Span(str, Enum):
    GLSM = "GLSM"
    GRSM = "GRSM"
    GSM = "GSM"
    NEITHER = "neither"


@dataclass(frozen=True)
class LdmMove:
    initial: GameState
    final: GameState
    translation_class: bool = True

    def __post_init__(self):
        if self.initial.is_empty():
            raise ValueError("an LDM needs a nonempty initial pattern")
        if self.initial == self.final:
            raise ValueError("initial and final patterns coincide")

    def to_dict(self) -> dict:
        return {
            "initial": state_to_dict(self.initial),
            "final": state_to_dict(self.final),
            "translation_class": self.translation_class,
        }


@dataclass
class LdmMoveSet:
    moves: list[LdmMove]
    max_chips: int = field(init=False)
    g_M: int = field(init=False)

    def __post_init__(self):
        self.max_chips = max((max(m.initial.chips, m.final.chips) for m in self.moves), default=0)
        self.g_M = max((max_gap(m.final) for m in self.moves if not m.final.is_empty()), default=0)


def classify_mass(m: LdmMove) -> Mass:
    a, b = m.initial.chips, m.final.chips
    if a < b:
        return Mass.INCREASING
    if a > b:
        return Mass.DECREASING
    return Mass.CONSERVATIVE


def classify_span(m: LdmMove) -> Span:
    """Compare the bounds ``[a, b]`` of ``m_i`` with ``[c, d]`` of ``m_f``."""
    if m.final.is_empty():
        return Span.NEITHER
    a, b = m.initial.left, m.initial.right
    c, d = m.final.left, m.final.right
    if c < a and d > b:
        return Span.GSM
    if c <= a and d > b:
        return Span.GRSM
    if c < a and d >= b:
        return Span.GLSM
    return Span.NEITHER


@dataclass(frozen=True)
class Verdict:
    terminates: bool
    direction: str | None = None
    bound_formula: str = ""
    reason: str = ""

    @property
    def status(self) -> str:
        return "Terminates" if self.terminates else "Unknown"

    def to_dict(self) -> dict:
        return {"status": self.status, "direction": self.direction,
                "bound_formula": self.bound_formula, "reason": self.reason}


def check_termination(ms: LdmMoveSet) -> Verdict:
    """Sufficient test: no mass-increasing move, and the conservative moves all
    extend the same way (all GRSM or all GLSM; a GSM counts as either)."""
    for k, m in enumerate(ms.moves):
        if classify_mass(m) is Mass.INCREASING:
            return Verdict(False, reason=f"move {k} is mass-increasing")
    spans = [classify_span(m) for m in ms.moves if classify_mass(m) is Mass.CONSERVATIVE]
    bound = f"n*({ms.max_chips}^w - 1), w = width of the window of play"
    if all(s in (Span.GRSM, Span.GSM) for s in spans):
        return Verdict(True, "GRSM", bound)
    if all(s in (Span.GLSM, Span.GSM) for s in spans):
        return Verdict(True, "GLSM", bound)
    return Verdict(False, reason="conservative moves extend in different directions or not at all")


def monovariant_f(S: GameState, ms: LdmMoveSet | int, window: tuple[int, int], mirrored: bool = False) -> int:
    """``sum S(i) M^(i - lo)`` over the window (``M^(hi - i)`` when mirrored)."""
    lo, hi = window
    M = ms if isinstance(ms, int) else ms.max_chips
    total = 0
    for i, c in S.items():
        if not lo <= i <= hi:
            raise OutOfWindow(f"summand at {i} outside window [{lo}, {hi}]")
        total += c * M ** ((hi - i) if mirrored else (i - lo))
    return total


# -- play ---------------------------------------------------------------

Placement = tuple[int, int]  # (move position in the set, shift)


def placements(S: GameState, ms: LdmMoveSet) -> list[Placement]:
    """Every playable (move, shift), sorted."""
    out = []
    support = S.support()
    for k, m in enumerate(ms.moves):
        a = m.initial.left
        if m.translation_class:
            shifts = [s - a for s in support]
        else:
            shifts = [0]
        for t in shifts:
            if contains(S, shift(m.initial, t)):
                out.append((k, t))
    return out


def apply_placement(S: GameState, ms: LdmMoveSet, pl: Placement) -> GameState:
    k, t = pl
    m = ms.moves[k]
    return add(subtract(S, shift(m.initial, t)), shift(m.final, t))


Chooser = Callable[[GameState, list[Placement]], Placement]


def first_chooser(S: GameState, options: list[Placement]) -> Placement:
    """Lowest move position, then lowest shift."""
    return options[0]


class RandomChooser:
    def __init__(self, seed: int):
        self.sampler = MoveSampler(seed)

    def __call__(self, S: GameState, options: list[Placement]) -> Placement:
        return options[self.sampler.below(len(options))]


@dataclass
class LdmTrace:
    initial: GameState
    moves: list[Placement]
    final: GameState
    min_left: int | None
    max_right: int | None

    @property
    def length(self) -> int:
        return len(self.moves)

    def states(self, ms: LdmMoveSet) -> list[GameState]:
        """Every state of the run, initial and final included."""
        out = [self.initial]
        for pl in self.moves:
            out.append(apply_placement(out[-1], ms, pl))
        return out

    def to_dict(self) -> dict:
        return {
            "initial": state_to_dict(self.initial),
            "final": state_to_dict(self.final),
            "moves": [list(p) for p in self.moves],
            "length": self.length,
            "min_left": self.min_left,
            "max_right": self.max_right,
        }


def generic_play(S: GameState, ms: LdmMoveSet, chooser: Chooser | None = None,
                 move_limit: int = 100_000) -> LdmTrace:
    """Play moves from ``ms`` until none applies; :class:`LimitExceeded` after ``move_limit``."""
    choose = chooser or first_chooser
    state = S
    played: list[Placement] = []
    lo, hi = S.left, S.right
    while True:
        options = placements(state, ms)
        if not options:
            return LdmTrace(S, played, state, lo, hi)
        if len(played) >= move_limit:
            raise LimitExceeded(f"still playable after {move_limit} moves",
                                LdmTrace(S, played, state, lo, hi))
        pl = choose(state, options)
        state = apply_placement(state, ms, pl)
        played.append(pl)
        if not state.is_empty():
            lo = state.left if lo is None else min(lo, state.left)
            hi = state.right if hi is None else max(hi, state.right)


# -- move sets ----------------------------------------------------------


def native_move_set(rec: Recurrence = BERGMAN) -> LdmMoveSet:
    """Split and combine of a depth-2 recurrence as translation-class LDMs."""
    if rec.k != 2:
        raise ValueError("the split restriction is not expressible as LDMs for depth > 2")
    c1, c2 = rec.coeffs
    split_f = {1: 1, -2: c2}
    if c1 - c2:
        split_f[-1] = c1 - c2
    split = LdmMove(GameState({0: c1 + 1}), GameState(split_f))
    combine = LdmMove(GameState({-2: c2, -1: c1}), GameState({0: 1}))
    return LdmMoveSet([split, combine])


def bergman_move_set() -> LdmMoveSet:
    return native_move_set(BERGMAN)


def _read_state(x) -> GameState:
    if isinstance(x, str):
        return parse_state(x)
    if isinstance(x, dict):
        return state_from_dict(x)
    raise ParseError(f"cannot read a state from {x!r}")


def move_set_from_json(data: str | list) -> LdmMoveSet:
    items = json.loads(data) if isinstance(data, str) else data
    if not isinstance(items, list):
        raise ParseError("a move-set file holds a JSON list")
    try:
        moves = [LdmMove(_read_state(d["initial"]), _read_state(d["final"]),
                         bool(d.get("translation_class", True))) for d in items]
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"bad move entry: {exc}") from exc
    return LdmMoveSet(moves)


def load_move_set(path: str | Path) -> LdmMoveSet:
    return move_set_from_json(Path(path).read_text())


def move_set_to_json(ms: LdmMoveSet) -> str:
    return json.dumps([m.to_dict() for m in ms.moves], sort_keys=True)


def _random_pattern(rng: random.Random, chips: int, lo: int, hi: int) -> dict[int, int]:
    cells: dict[int, int] = {}
    for _ in range(chips):
        i = rng.randint(lo, hi)
        cells[i] = cells.get(i, 0) + 1
    return cells


def random_move_set(rng: random.Random, max_moves: int = 3) -> LdmMoveSet:
    """A random move set that :func:`check_termination` certifies.

    Conservative moves all extend to one side (chosen at random); the others
    lose at least one chip.
    """
    mirror = rng.random() < 0.5
    moves = []
    for k in range(rng.randint(1, max_moves)):
        chips = rng.randint(2, 3)
        init = _random_pattern(rng, chips, 0, 2)
        a, b = min(init), max(init)
        if k == 0 or rng.random() < 0.5:
            c, d = a - rng.randint(0, 2), b + rng.randint(1, 2)
            fin = _random_pattern(rng, chips - 2, c, d)
            fin[c] = fin.get(c, 0) + 1
            fin[d] = fin.get(d, 0) + 1
        else:
            fin = _random_pattern(rng, rng.randint(0, chips - 1), -2, 4)
        if mirror:
            init = {-i: v for i, v in init.items()}
            fin = {-i: v for i, v in fin.items()}
        moves.append(LdmMove(GameState(init), GameState(fin), rng.random() < 0.8 or k == 0))
    return LdmMoveSet(moves)


def random_state(rng: random.Random, max_chips: int = 30, max_width: int = 40) -> GameState:
    width = rng.randint(1, max_width)
    return GameState(_random_pattern(rng, rng.randint(1, max_chips), 0, width - 1))


def termination_bound(n: int, ms: LdmMoveSet, w: int) -> int:
    """``n (M^w - 1)`` moves for ``n`` chips on a window of ``w + 1`` indices."""
    return n * (ms.max_chips**w - 1)

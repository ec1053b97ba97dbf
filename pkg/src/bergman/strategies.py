"""Strategies, the game runner, and exhaustive game-tree search."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .errors import CapExceeded, LimitExceeded, WrongRecurrence
from .moves import COMBINE, SPLIT, Move, MoveKind, MoveTable, apply, legal_moves
from .recurrence import Recurrence, new_recurrence
from .state import GameState, state_from_dict, state_to_dict

_MASK64 = (1 << 64) - 1


class Direction(str, Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class Priority:
    """Take moves of kind ``first`` at the ``first_dir`` extreme, else the other kind at ``second_dir``."""

    first: MoveKind
    first_dir: Direction
    second_dir: Direction

    @property
    def name(self) -> str:
        a = "s" if self.first is SPLIT else "c"
        b = "c" if a == "s" else "s"
        return f"{a}{self.first_dir.value[0]}{b}{self.second_dir.value[0]}"


@dataclass(frozen=True)
class QuickTermination:
    name = "qt"


@dataclass(frozen=True)
class RandomPlay:
    seed: int = 0

    name = "random"


Strategy = Union[Priority, QuickTermination, RandomPlay]

L, R = Direction.LEFT, Direction.RIGHT
SLCR = Priority(SPLIT, L, R)
SLCL = Priority(SPLIT, L, L)
SRCL = Priority(SPLIT, R, L)
SRCR = Priority(SPLIT, R, R)
CLSL = Priority(COMBINE, L, L)
CLSR = Priority(COMBINE, L, R)
CRSR = Priority(COMBINE, R, R)
CRSL = Priority(COMBINE, R, L)
QT = QuickTermination()

PRIORITY_STRATEGIES = {s.name: s for s in (SLCR, SLCL, SRCL, SRCR, CLSL, CLSR, CRSR, CRSL)}
STRATEGY_NAMES = tuple(PRIORITY_STRATEGIES) + ("qt", "random")


def parse_strategy(name: str, seed: int = 0) -> Strategy:
    name = name.strip().lower()
    if name in PRIORITY_STRATEGIES:
        return PRIORITY_STRATEGIES[name]
    if name == "qt":
        return QT
    if name == "random":
        return RandomPlay(seed)
    raise ValueError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGY_NAMES)}")


# -- randomness ---------------------------------------------------------


class MoveSampler:
    """Uniform integers from a PCG64 stream (unbiased multiply-shift with rejection)."""

    def __init__(self, seed: int):
        self._bits = np.random.PCG64(seed)
        self._buf: list[int] = []
        self._pos = 0

    def _next64(self) -> int:
        if self._pos == len(self._buf):
            self._buf = self._bits.random_raw(1024).tolist()
            self._pos = 0
        x = self._buf[self._pos]
        self._pos += 1
        return x

    def below(self, n: int) -> int:
        m = self._next64() * n
        low = m & _MASK64
        if low < n:
            threshold = (1 << 64) % n
            while low < threshold:
                m = self._next64() * n
                low = m & _MASK64
        return m >> 64


def trial_seed(base_seed: int, trial_index: int) -> int:
    """64-bit seed of trial ``trial_index``, independent of how trials are scheduled."""
    ss = np.random.SeedSequence(base_seed, spawn_key=(trial_index,))
    return int(ss.generate_state(1, np.uint64)[0])


# -- choosing moves -----------------------------------------------------


def _priority_choice(s: Priority, table: MoveTable) -> Move | None:
    splits, combines = table.splits, table.combines
    if s.first is SPLIT:
        primary, secondary = splits, combines
    else:
        primary, secondary = combines, splits
    if primary:
        kind, lst, d = s.first, primary, s.first_dir
    elif secondary:
        kind = COMBINE if s.first is SPLIT else SPLIT
        lst, d = secondary, s.second_dir
    else:
        return None
    i = lst[0] if d is L else lst[-1]
    return Move(COMBINE, i) if kind is COMBINE else Move(SPLIT, i, table.split_p[i])


def qt_priority(cells: dict, i: int) -> int:
    """QT priority class (2..5) of the Bergman split at ``i``."""
    get = cells.get
    s = get(i, 0)
    if s >= 3:
        return 2
    if s == 2 and not get(i - 1, 0) and not get(i + 1, 0):
        if get(i - 3, 0) > 0 or get(i + 2, 0) > 0:
            return 3
        if get(i - 2, 0) >= 2:
            return 4
    return 5


def _qt_choice(table: MoveTable) -> Move | None:
    if table.combines:
        return Move(COMBINE, table.combines[-1])
    if not table.splits:
        return None
    cells = table.state._cells
    best_i, best_pr = None, 6
    # scanning right to left keeps the rightmost index within each class
    for i in reversed(table.splits):
        pr = qt_priority(cells, i)
        if pr < best_pr:
            best_i, best_pr = i, pr
            if pr == 2:
                break
    return Move(SPLIT, best_i, 1)


class _Chooser:
    def __init__(self, strategy: Strategy, rec: Recurrence):
        if isinstance(strategy, QuickTermination) and not rec.is_bergman:
            raise WrongRecurrence("the QT strategy is defined only for the recurrence [1, 1]")
        if not isinstance(strategy, (Priority, QuickTermination, RandomPlay)):
            raise TypeError(f"not a strategy: {strategy!r}")
        self.strategy = strategy
        self.sampler = MoveSampler(strategy.seed) if isinstance(strategy, RandomPlay) else None

    def __call__(self, table: MoveTable) -> Move | None:
        s = self.strategy
        if isinstance(s, Priority):
            return _priority_choice(s, table)
        if isinstance(s, QuickTermination):
            return _qt_choice(table)
        n = len(table)
        if not n:
            return None
        return table.nth(self.sampler.below(n))


def choose_move(strategy: Strategy, S: GameState, rec: Recurrence) -> Move | None:
    """The move ``strategy`` plays from ``S``; None iff ``S`` is terminal.

    For random play this is the first draw of the strategy's seeded stream.
    """
    return _Chooser(strategy, rec)(MoveTable(S.copy(), rec))


# -- traces -------------------------------------------------------------


@dataclass
class GameTrace:
    initial: GameState
    moves: list[Move] | None
    final: GameState
    combines: int
    splits: int
    min_left: int | None
    max_right: int | None
    strategy: str = ""
    coeffs: tuple[int, ...] = (1, 1)
    seed: int | None = None

    @property
    def length(self) -> int:
        return self.combines + self.splits

    @property
    def winner(self) -> int:
        return 1 if self.length % 2 else 2

    def first_combine(self) -> int | None:
        """Position of the first combine in ``moves``."""
        for t, m in enumerate(self.moves or ()):
            if m.kind is COMBINE:
                return t
        return None

    def to_dict(self) -> dict:
        from .state import format_state

        d = {
            "rec": list(self.coeffs),
            "strategy": self.strategy,
            "initial": state_to_dict(self.initial),
            "initial_text": format_state(self.initial),
            "final": state_to_dict(self.final),
            "final_text": format_state(self.final),
            "length": self.length,
            "combines": self.combines,
            "splits": self.splits,
            "min_left": self.min_left,
            "max_right": self.max_right,
            "winner": self.winner,
        }
        if self.seed is not None:
            d["seed"] = self.seed
        if self.moves is not None:
            d["moves"] = [m.to_dict() for m in self.moves]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "GameTrace":
        moves = [Move.from_dict(m) for m in d["moves"]] if "moves" in d else None
        return cls(
            initial=state_from_dict(d["initial"]),
            moves=moves,
            final=state_from_dict(d["final"]),
            combines=d["combines"],
            splits=d["splits"],
            min_left=d["min_left"],
            max_right=d["max_right"],
            strategy=d.get("strategy", ""),
            coeffs=tuple(d.get("rec", (1, 1))),
            seed=d.get("seed"),
        )


def play(
    S: GameState,
    strategy: Strategy,
    rec: Recurrence,
    move_limit: int | None = None,
    record: bool = True,
) -> GameTrace:
    """Play ``strategy`` from ``S`` until no move is left.

    Raises :class:`LimitExceeded` after ``move_limit`` moves; the default
    limit is ten times the explicit quadratic bound, so hitting it means a
    defect rather than a long game.
    """
    if move_limit is None:
        from .bounds import default_move_limit

        move_limit = default_move_limit(S, rec)
    if move_limit < 1:
        raise ValueError("move_limit must be >= 1")
    choose = _Chooser(strategy, rec)
    state = S.copy()
    table = MoveTable(state, rec)
    moves: list[Move] | None = [] if record else None
    nc = ns = 0
    min_left, max_right = state.left, state.right
    while True:
        m = choose(table)
        if m is None:
            break
        if nc + ns >= move_limit:
            partial = GameTrace(S.copy(), moves, state.copy(), nc, ns, min_left, max_right,
                                strategy.name, rec.coeffs)
            raise LimitExceeded(f"no terminal state after {move_limit} moves", partial)
        table.play(m)
        if m.kind is COMBINE:
            nc += 1
        else:
            ns += 1
        if record:
            moves.append(m)
        if state.left < min_left:
            min_left = state.left
        if state.right > max_right:
            max_right = state.right
    seed = strategy.seed if isinstance(strategy, RandomPlay) else None
    return GameTrace(S.copy(), moves, state, nc, ns, min_left, max_right,
                     strategy.name, rec.coeffs, seed)


def replay(initial: GameState, moves: list[Move], rec: Recurrence) -> GameState:
    """Apply ``moves`` in order, validating each."""
    state = initial
    for m in moves:
        state = apply(state, m, rec)
    return state


def trace_recurrence(trace: GameTrace) -> Recurrence:
    return new_recurrence(trace.coeffs)


# -- exhaustive search --------------------------------------------------


def exhaustive_game_lengths(
    S: GameState, rec: Recurrence, node_cap: int = 1_000_000
) -> tuple[int, int, int]:
    """``(shortest, longest, distinct reachable states)`` over every game from ``S``."""
    memo: dict[tuple, tuple[int, int]] = {}
    # frame: [state, moves, next move position, best min, best max]
    stack = [[S, legal_moves(S, rec), 0, None, None]]

    def absorb(frame, lo, hi):
        frame[3] = lo + 1 if frame[3] is None else min(frame[3], lo + 1)
        frame[4] = hi + 1 if frame[4] is None else max(frame[4], hi + 1)

    while stack:
        frame = stack[-1]
        state, ms, pos = frame[0], frame[1], frame[2]
        if pos < len(ms):
            frame[2] += 1
            child = apply(state, ms[pos], rec)
            ck = child.key()
            if ck in memo:
                absorb(frame, *memo[ck])
            else:
                if len(memo) + len(stack) >= node_cap:
                    raise CapExceeded(f"more than {node_cap} reachable states")
                stack.append([child, legal_moves(child, rec), 0, None, None])
            continue
        stack.pop()
        result = (0, 0) if not ms else (frame[3], frame[4])
        memo[state.key()] = result
        if stack:
            absorb(stack[-1], *result)
    lo, hi = memo[S.key()]
    return lo, hi, len(memo)

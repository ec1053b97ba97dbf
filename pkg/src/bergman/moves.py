"""Moves of the Generalized Bergman Game.

Indexing convention: a combine "at i" consumes ``c_j`` summands at ``i - j``
for ``j = 1..k`` and puts one summand at ``i``.  A split of type ``p`` "at i"
consumes ``c_p + 1`` at ``i`` and ``c_{p-j}`` at ``i + j`` (``j < p``), puts one
summand at ``i + p`` and ``d_{p,j}`` at ``i - j``.  Only the smallest legal
split type at an index is ever offered (the split restriction).
"""

from __future__ import annotations

from bisect import bisect_left, insort
from dataclasses import dataclass
from enum import Enum

from .errors import IllegalMove, InvariantError, NegativeEntry, ParseError
from .recurrence import Recurrence, d_coeff
from .state import GameState


class MoveKind(str, Enum):
    COMBINE = "combine"
    SPLIT = "split"


COMBINE = MoveKind.COMBINE
SPLIT = MoveKind.SPLIT


@dataclass(frozen=True, slots=True)
class Move:
    kind: MoveKind
    index: int
    p: int | None = None

    def __post_init__(self):
        if (self.kind is SPLIT) != (self.p is not None):
            raise ValueError("split moves carry a type p; combines do not")

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "index": self.index}
        if self.p is not None:
            d["p"] = self.p
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Move":
        try:
            kind = MoveKind(d["kind"])
            return cls(kind, int(d["index"]), int(d["p"]) if kind is SPLIT else None)
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"bad move {d!r}") from exc

    def __str__(self) -> str:
        if self.kind is SPLIT:
            return f"split(p={self.p})@{self.index}"
        return f"combine@{self.index}"


def combine_move(i: int) -> Move:
    return Move(COMBINE, i)


def split_move(i: int, p: int = 1) -> Move:
    return Move(SPLIT, i, p)


# -- move templates -----------------------------------------------------


def _templates(rec: Recurrence) -> dict:
    """Per-recurrence offset/delta tables, increments listed before decrements."""
    cache = rec._cache
    if "templates" in cache:
        return cache["templates"]
    k = rec.k
    combine = [(0, 1)] + [(-j, -rec.c(j)) for j in range(1, k + 1)]
    splits = {}
    for p in range(1, k):
        inc = [(p, 1)] + [(-j, d_coeff(rec, p, j)) for j in range(1, k + 1) if d_coeff(rec, p, j)]
        dec = [(0, -(rec.c(p) + 1))] + [(j, -rec.c(p - j)) for j in range(1, p)]
        splits[p] = inc + dec
    # legality patterns: (offset, required count)
    combine_need = [(-j, rec.c(j)) for j in range(1, k + 1)]
    split_need = {p: [(0, rec.c(p) + 1)] + [(j, rec.c(p - j)) for j in range(1, p)] for p in range(1, k)}
    t = {
        "combine": combine,
        "split": splits,
        "combine_need": combine_need,
        "split_need": split_need,
    }
    cache["templates"] = t
    return t


def move_deltas(m: Move, rec: Recurrence) -> list[tuple[int, int]]:
    """``(index, delta)`` pairs of a move, increments first."""
    t = _templates(rec)
    i = m.index
    if m.kind is COMBINE:
        return [(i + off, d) for off, d in t["combine"]]
    if m.p not in t["split"]:
        raise IllegalMove(f"split type {m.p} outside [1, {rec.k - 1}]")
    return [(i + off, d) for off, d in t["split"][m.p]]


def combine_legal_at(cells: dict, i: int, rec: Recurrence) -> bool:
    get = cells.get
    for off, need in _templates(rec)["combine_need"]:
        if get(i + off, 0) < need:
            return False
    return True


def split_type_at(cells: dict, i: int, rec: Recurrence) -> int | None:
    """Smallest legal split type at ``i``, or None."""
    get = cells.get
    for p, need in _templates(rec)["split_need"].items():
        for off, n in need:
            if get(i + off, 0) < n:
                break
        else:
            return p
    return None


# -- enumeration --------------------------------------------------------


def legal_combines(S: GameState, rec: Recurrence) -> list[Move]:
    cells = S._cells
    # a combine into q needs a summand at q - 1
    cands = sorted({i + 1 for i in cells})
    return [Move(COMBINE, q) for q in cands if combine_legal_at(cells, q, rec)]


def legal_splits(S: GameState, rec: Recurrence) -> list[Move]:
    cells = S._cells
    out = []
    for i in sorted(cells):
        p = split_type_at(cells, i, rec)
        if p is not None:
            out.append(Move(SPLIT, i, p))
    return out


def legal_moves(S: GameState, rec: Recurrence) -> list[Move]:
    """Combines ascending by index, then splits ascending by index."""
    return legal_combines(S, rec) + legal_splits(S, rec)


def is_terminal(S: GameState, rec: Recurrence) -> bool:
    cells = S._cells
    for i in cells:
        if combine_legal_at(cells, i + 1, rec) or split_type_at(cells, i, rec) is not None:
            return False
    return True


def is_legal(S: GameState, m: Move, rec: Recurrence) -> bool:
    if m.kind is COMBINE:
        return combine_legal_at(S._cells, m.index, rec)
    return split_type_at(S._cells, m.index, rec) == m.p


def apply(S: GameState, m: Move, rec: Recurrence) -> GameState:
    """Return the state after playing ``m``; raises :class:`IllegalMove` if it is not legal."""
    if not is_legal(S, m, rec):
        raise IllegalMove(f"{m} is not legal in {S!r}")
    T = S.copy()
    for i, d in move_deltas(m, rec):
        T._bump(i, d)
    return T


def unapply(S: GameState, m: Move, rec: Recurrence) -> GameState:
    """Inverse of :func:`apply`: the state from which ``m`` leads to ``S``."""
    deltas = [(i, -d) for i, d in move_deltas(m, rec)]
    cells = S._cells
    for i, d in deltas:
        if d < 0 and cells.get(i, 0) + d < 0:
            raise NegativeEntry(f"reversing {m} needs {-d} summands at index {i}")
    T = S.copy()
    for i, d in sorted(deltas, key=lambda t: t[1] < 0):
        T._bump(i, d)
    return T


def chunk_decompose(S: GameState, rec: Recurrence) -> list[GameState]:
    """Split ``S`` at every zero run of length ``k + 1`` or more."""
    chunks: list[GameState] = []
    current: dict[int, int] = {}
    prev = None
    for i, n in S.items():
        if prev is not None and i - prev - 1 >= rec.k + 1:
            chunks.append(GameState(current))
            current = {}
        current[i] = n
        prev = i
    if current:
        chunks.append(GameState(current))
    return chunks


# -- incremental engine -------------------------------------------------


class MoveTable:
    """Legal moves of a state that is mutated move by move.

    The table owns ``state``.  After each move only the indices whose
    legality can change (those within ``k`` of the move's footprint) are
    re-examined, so the per-move cost is ``O(k^2)`` plus list maintenance.
    """

    def __init__(self, state: GameState, rec: Recurrence):
        self.state = state
        self.rec = rec
        t = _templates(rec)
        self._combine_t = t["combine"]
        self._split_t = t["split"]
        self._combine_need = t["combine_need"]
        self._split_need = list(t["split_need"].items())
        self.combines: list[int] = []
        self.splits: list[int] = []
        self.split_p: dict[int, int] = {}
        self._cset: set[int] = set()
        cells = state._cells
        for q in sorted({i + 1 for i in cells}):
            if self._combine_ok(q):
                self.combines.append(q)
                self._cset.add(q)
        for i in sorted(cells):
            p = self._split_type(i)
            if p is not None:
                self.splits.append(i)
                self.split_p[i] = p

    def _combine_ok(self, q: int) -> bool:
        get = self.state._cells.get
        for off, need in self._combine_need:
            if get(q + off, 0) < need:
                return False
        return True

    def _split_type(self, i: int) -> int | None:
        get = self.state._cells.get
        for p, need in self._split_need:
            for off, n in need:
                if get(i + off, 0) < n:
                    break
            else:
                return p
        return None

    def __len__(self) -> int:
        return len(self.combines) + len(self.splits)

    def moves(self) -> list[Move]:
        return [Move(COMBINE, q) for q in self.combines] + [
            Move(SPLIT, i, self.split_p[i]) for i in self.splits
        ]

    def nth(self, r: int) -> Move:
        """The ``r``-th move of :meth:`moves` without materialising the list."""
        nc = len(self.combines)
        if r < nc:
            return Move(COMBINE, self.combines[r])
        i = self.splits[r - nc]
        return Move(SPLIT, i, self.split_p[i])

    def play(self, m: Move) -> None:
        i = m.index
        if m.kind is COMBINE:
            if i not in self._cset:
                raise IllegalMove(f"{m} is not legal")
            template = self._combine_t
            lo, hi = i - self.rec.k, i
        else:
            if self.split_p.get(i) != m.p:
                raise IllegalMove(f"{m} is not legal")
            template = self._split_t[m.p]
            lo, hi = i - self.rec.k, i + m.p
        bump = self.state._bump
        for off, d in template:
            bump(i + off, d)
        self._refresh(lo, hi)

    def _refresh(self, lo: int, hi: int) -> None:
        k = self.rec.k
        cset = self._cset
        combines = self.combines
        for q in range(lo + 1, hi + k + 1):
            ok = self._combine_ok(q)
            if ok != (q in cset):
                if ok:
                    cset.add(q)
                    insort(combines, q)
                else:
                    cset.remove(q)
                    del combines[bisect_left(combines, q)]
        split_p = self.split_p
        splits = self.splits
        for q in range(lo - k + 2, hi + 1):
            p = self._split_type(q)
            old = split_p.get(q)
            if p == old:
                continue
            if p is None:
                del split_p[q]
                del splits[bisect_left(splits, q)]
            else:
                if old is None:
                    insort(splits, q)
                split_p[q] = p

    def verify(self) -> None:
        """Compare against a from-scratch enumeration; raises on mismatch."""
        if self.moves() != legal_moves(self.state, self.rec):
            raise InvariantError("incremental move table out of sync")

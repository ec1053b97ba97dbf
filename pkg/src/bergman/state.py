"""Game states on the doubly infinite tuple and their exact values in Q(beta).

A :class:`GameState` is a finitely supported map ``index -> count``.  Public
operations treat it as a value: they return new states and never mutate
their arguments.  The ``_bump`` method is the single in-place mutation hook
and is used only by the move engine on states it owns.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import EmptyState, InvariantError, NegativeEntry, ParseError
from .recurrence import Recurrence

# sign decisions refine the bracket of beta up to this many bits before giving up
_MAX_SIGN_BITS = 1 << 20


class GameState:
    __slots__ = ("_cells", "_chips", "_index_sum", "_left", "_right")

    def __init__(self, cells: Mapping[int, int] | None = None):
        self._cells: dict[int, int] = {}
        self._chips = 0
        self._index_sum = 0
        self._left: int | None = None
        self._right: int | None = None
        if cells:
            for i, n in cells.items():
                if n < 0:
                    raise NegativeEntry(f"negative count {n} at index {i}")
                if n:
                    self._cells[int(i)] = int(n)
            self._recount()

    def _recount(self) -> None:
        cells = self._cells
        self._chips = sum(cells.values())
        self._index_sum = sum(i * n for i, n in cells.items())
        if cells:
            self._left = min(cells)
            self._right = max(cells)
        else:
            self._left = self._right = None

    @classmethod
    def from_counts(cls, offset: int, counts: Sequence[int]) -> "GameState":
        return cls({offset + j: n for j, n in enumerate(counts) if n})

    # -- read access -----------------------------------------------------

    def __getitem__(self, i: int) -> int:
        return self._cells.get(i, 0)

    def get(self, i: int) -> int:
        return self._cells.get(i, 0)

    @property
    def chips(self) -> int:
        return self._chips

    @property
    def index_sum(self) -> int:
        return self._index_sum

    @property
    def left(self) -> int | None:
        return self._left

    @property
    def right(self) -> int | None:
        return self._right

    @property
    def length(self) -> int:
        """``right - left``; zero for single-index and empty states."""
        if self._left is None:
            return 0
        return self._right - self._left

    def is_empty(self) -> bool:
        return not self._cells

    def support(self) -> list[int]:
        return sorted(self._cells)

    def items(self) -> Iterator[tuple[int, int]]:
        for i in sorted(self._cells):
            yield i, self._cells[i]

    def to_counts(self) -> tuple[int, list[int]]:
        """Return ``(offset, counts)`` spanning exactly ``left..right``."""
        if not self._cells:
            return 0, []
        a, b = self._left, self._right
        return a, [self._cells.get(i, 0) for i in range(a, b + 1)]

    def key(self) -> tuple:
        """Hashable canonical key."""
        return tuple(sorted(self._cells.items()))

    def copy(self) -> "GameState":
        new = GameState.__new__(GameState)
        new._cells = dict(self._cells)
        new._chips = self._chips
        new._index_sum = self._index_sum
        new._left = self._left
        new._right = self._right
        return new

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GameState):
            return NotImplemented
        return self._cells == other._cells

    def __hash__(self) -> int:
        return hash(frozenset(self._cells.items()))

    def __len__(self) -> int:
        return len(self._cells)

    def __repr__(self) -> str:
        return f"GameState({format_state(self)})"

    # -- in-place mutation (engine only) ---------------------------------

    def _bump(self, i: int, delta: int) -> None:
        """Add ``delta`` summands at ``i``.

        Callers must apply all increments of a move before its decrements so
        that the left/right rescans stop within the move's footprint.
        """
        cells = self._cells
        n = cells.get(i, 0) + delta
        if n < 0:
            raise NegativeEntry(f"index {i} would hold {n} summands")
        self._chips += delta
        self._index_sum += i * delta
        if n:
            cells[i] = n
            if delta > 0:
                if self._left is None or i < self._left:
                    self._left = i
                if self._right is None or i > self._right:
                    self._right = i
            return
        del cells[i]
        if not cells:
            self._left = self._right = None
            return
        if i == self._left:
            j = i + 1
            while j not in cells:
                j += 1
            self._left = j
        if i == self._right:
            j = i - 1
            while j not in cells:
                j -= 1
            self._right = j

    def check_aggregates(self) -> None:
        """Raise :class:`InvariantError` if cached aggregates drifted from the entries."""
        fresh = GameState(self._cells)
        if (fresh._chips, fresh._index_sum, fresh._left, fresh._right) != (
            self._chips,
            self._index_sum,
            self._left,
            self._right,
        ):
            raise InvariantError("cached aggregates inconsistent with entries")


EMPTY = GameState()


def make_state(offset: int, counts: Sequence[int]) -> GameState:
    """State with ``counts[j]`` summands at ``offset + j``; zeros are dropped."""
    if any(n < 0 for n in counts):
        raise NegativeEntry(f"negative count in {list(counts)}")
    return GameState.from_counts(offset, counts)


def single(index: int, n: int) -> GameState:
    """The state ``_index(n)``."""
    return GameState({index: n}) if n else GameState()


def chips(S: GameState) -> int:
    return S.chips


def index_sum(S: GameState) -> int:
    return S.index_sum


def shift(S: GameState, t: int) -> GameState:
    return GameState({i + t: n for i, n in S._cells.items()})


def add(S: GameState, T: GameState) -> GameState:
    cells = dict(S._cells)
    for i, n in T._cells.items():
        cells[i] = cells.get(i, 0) + n
    return GameState(cells)


def subtract(S: GameState, T: GameState) -> GameState:
    cells = dict(S._cells)
    for i, n in T._cells.items():
        have = cells.get(i, 0)
        if have < n:
            raise NegativeEntry(f"cannot remove {n} summands from index {i} holding {have}")
        cells[i] = have - n
    return GameState(cells)


def contains(S: GameState, T: GameState) -> bool:
    """True when ``S(j) >= T(j)`` everywhere, i.e. ``subtract(S, T)`` is defined."""
    cells = S._cells
    return all(cells.get(i, 0) >= n for i, n in T._cells.items())


def max_gap(S: GameState) -> int:
    """Longest run of zero indices strictly between the leftmost and rightmost summand."""
    if S.is_empty():
        raise EmptyState("max_gap of the empty state")
    idx = S.support()
    return max((b - a - 1 for a, b in zip(idx, idx[1:])), default=0)


# -- text and JSON forms --------------------------------------------------

_TEXT_RE = re.compile(r"^_(-?\d+)\(\s*([0-9,\s]*)\)(?:_(-?\d+))?$")


def format_state(S: GameState) -> str:
    """``_a(x0,...,xm)_b`` with ``a``/``b`` the leftmost/rightmost nonzero index."""
    if S.is_empty():
        return "()"
    a, counts = S.to_counts()
    return f"_{a}({','.join(map(str, counts))})_{a + len(counts) - 1}"


def parse_state(text: str) -> GameState:
    """Parse either the text notation ``_a(x0,...,xm)[_b]`` or the JSON form.

    When the trailing ``_b`` is given it must agree with ``a + m``; anything
    that does not match exactly one of the two forms is rejected.
    """
    text = text.strip()
    if text in ("()", ""):
        return GameState()
    if text.startswith("{"):
        try:
            return state_from_dict(json.loads(text))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"bad JSON state {text!r}") from exc
    m = _TEXT_RE.match(text.replace(" ", ""))
    if not m:
        raise ParseError(f"cannot parse state {text!r}")
    a = int(m.group(1))
    body = m.group(2)
    try:
        counts = [int(t) for t in body.split(",")] if body else []
    except ValueError as exc:
        raise ParseError(f"bad counts in {text!r}") from exc
    if m.group(3) is not None and int(m.group(3)) != a + len(counts) - 1:
        raise ParseError(f"right index in {text!r} disagrees with the number of entries")
    return make_state(a, counts)


def state_to_dict(S: GameState) -> dict:
    a, counts = S.to_counts()
    return {"offset": a, "counts": counts}


def state_from_dict(d: Mapping) -> GameState:
    counts = d["counts"]
    if not isinstance(counts, list) or not all(isinstance(n, int) for n in counts):
        raise ParseError("counts must be a list of integers")
    return make_state(int(d["offset"]), counts)


# -- exact values in Q(beta) ----------------------------------------------


@dataclass(frozen=True)
class FieldElement:
    """``a_0 + a_1 beta + ... + a_{k-1} beta^{k-1}`` with exact rational coordinates.

    ``modulus`` holds the recurrence coefficients, which fix the reduction
    ``beta^k = c_1 beta^{k-1} + ... + c_k``.
    """

    coords: tuple[Fraction, ...]
    modulus: tuple[int, ...]

    @classmethod
    def from_int(cls, n: int, rec: Recurrence) -> "FieldElement":
        return cls._make([n] + [0] * (rec.k - 1), rec.coeffs)

    @classmethod
    def _make(cls, coords: Iterable, modulus: tuple[int, ...]) -> "FieldElement":
        return cls(tuple(Fraction(c) for c in coords), modulus)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "FieldElement") -> None:
        if self.modulus != other.modulus:
            raise ValueError("elements of different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(tuple(a + b for a, b in zip(self.coords, other.coords)), self.modulus)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(tuple(a - b for a, b in zip(self.coords, other.coords)), self.modulus)

    def __neg__(self) -> "FieldElement":
        return FieldElement(tuple(-a for a in self.coords), self.modulus)

    def scale(self, q: int | Fraction) -> "FieldElement":
        q = Fraction(q)
        return FieldElement(tuple(a * q for a in self.coords), self.modulus)

    def __mul__(self, other: "FieldElement | int | Fraction") -> "FieldElement":
        if not isinstance(other, FieldElement):
            return self.scale(other)
        self._check(other)
        k = len(self.coords)
        prod = [Fraction(0)] * (2 * k - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    prod[i + j] += a * b
        return FieldElement(tuple(_reduce(prod, self.modulus)), self.modulus)

    __rmul__ = __mul__

    def times_beta(self) -> "FieldElement":
        top = self.coords[-1]
        k = len(self.coords)
        # beta^k = sum_j c_j beta^(k-j)
        new = [Fraction(0)] + list(self.coords[:-1])
        if top:
            for j, cj in enumerate(self.modulus, start=1):
                new[k - j] += top * cj
        return FieldElement(tuple(new), self.modulus)

    def times_beta_inverse(self) -> "FieldElement":
        c = self.modulus
        k = len(c)
        a0 = self.coords[0]
        new = list(self.coords[1:]) + [Fraction(0)]
        if a0:
            # beta^-1 = (beta^(k-1) - c_1 beta^(k-2) - ... - c_(k-1)) / c_k
            q = a0 / c[-1]
            new[k - 1] += q
            for j in range(1, k):
                new[k - 1 - j] -= q * c[j - 1]
        return FieldElement(tuple(new), self.modulus)

    def embed(self, x: complex | float) -> complex | float:
        """Evaluate the coordinate polynomial at ``x`` (floating point)."""
        acc = 0.0
        for a in reversed(self.coords):
            acc = acc * x + float(a)
        return acc

    def real_value(self, rec: Recurrence) -> float:
        return float(self.embed(rec.beta))

    def __repr__(self) -> str:
        return f"FieldElement({', '.join(str(a) for a in self.coords)})"


def _reduce(poly: list, modulus: tuple[int, ...]) -> list:
    k = len(modulus)
    poly = list(poly)
    for m in range(len(poly) - 1, k - 1, -1):
        top = poly[m]
        if top:
            poly[m] = 0
            for j, cj in enumerate(modulus, start=1):
                poly[m - j] += top * cj
    return poly[:k] + [0] * (k - len(poly[:k]))


def beta_power(rec: Recurrence, t: int) -> FieldElement:
    """Exact ``beta**t`` (any integer ``t``), cached per recurrence."""
    cache = rec._cache.setdefault("pow", {0: FieldElement.from_int(1, rec)})
    if t in cache:
        return cache[t]
    step = 1 if t > 0 else -1
    j = t
    while j not in cache:
        j -= step
    x = cache[j]
    while j != t:
        x = x.times_beta() if step > 0 else x.times_beta_inverse()
        j += step
        cache[j] = x
    return x


def exact_value(S: GameState, rec: Recurrence) -> FieldElement:
    """``v(S) = sum_j S(j) beta^j`` exactly."""
    k = rec.k
    if S.is_empty():
        return FieldElement((Fraction(0),) * k, rec.coeffs)
    cs = rec.coeffs
    cells = S._cells
    a, b = S.left, S.right
    # Horner over the support in exact integers: sum_j S(a+j) beta^j in Z[beta]
    acc = [0] * k
    for i in range(b, a - 1, -1):
        top = acc[-1]
        acc = [0] + acc[:-1]
        if top:
            for j in range(1, k + 1):
                acc[k - j] += top * cs[j - 1]
        acc[0] += cells.get(i, 0)
    base = FieldElement(tuple(Fraction(x) for x in acc), cs)
    if a == 0:
        return base
    return base * beta_power(rec, a)


def field_sign(x: FieldElement, rec: Recurrence) -> int:
    """Exact sign of the real embedding of ``x``.

    Zero is decided from the coordinates.  Otherwise the coordinate
    polynomial is evaluated over a dyadic enclosure of beta, which is
    narrowed by bisection until the resulting interval excludes zero.
    """
    coords = x.coords
    if not any(coords):
        return 0
    den = math.lcm(*(c.denominator for c in coords))
    ints = [c.numerator * (den // c.denominator) for c in coords]
    k = len(ints)
    bits = 64
    while bits <= _MAX_SIGN_BITS:
        lo, e = rec.beta_bracket(bits)
        hi = lo + 1
        lower = upper = 0
        for i, n in enumerate(ints):
            if not n:
                continue
            scale = e * (k - 1 - i)
            t_lo = (n * lo**i) << scale
            t_hi = (n * hi**i) << scale
            if n > 0:
                lower += t_lo
                upper += t_hi
            else:
                lower += t_hi
                upper += t_lo
        if lower > 0:
            return 1
        if upper < 0:
            return -1
        bits *= 2
    raise InvariantError("sign of a nonzero field element could not be resolved")


def field_compare(x: FieldElement, y: FieldElement, rec: Recurrence) -> int:
    """-1, 0 or +1 as ``x`` is below, equal to, or above ``y``."""
    return field_sign(x - y, rec)


def conjugate_value(S: GameState, rec: Recurrence, verify: bool = True) -> complex:
    """``sum_j S(j) bt^j`` for the maximal-modulus conjugate ``bt``.

    For depth 2 the value is also obtained from the exact coordinates of
    ``v(S)`` through the conjugation ``beta -> c_1 - beta``; with ``verify``
    the two routes must agree to ``1e-9`` (relative to ``abs_conjugate_sum``).
    """
    bt = rec.beta_tilde
    total = 0j
    for i, n in S._cells.items():
        total += n * bt**i
    if verify and rec.k == 2 and S._cells:
        exact = conjugate_value_quadratic(S, rec)
        scale = max(1.0, abs_conjugate_sum(S, rec))
        if abs(exact - total) > 1e-9 * scale:
            raise InvariantError(f"conjugate routes disagree: {exact!r} vs {total!r}")
    return total


def conjugate_value_quadratic(S: GameState, rec: Recurrence) -> float:
    """Depth-2 conjugate value through the exact quadratic conjugation."""
    if rec.k != 2:
        raise ValueError("quadratic conjugation needs a depth-2 recurrence")
    a0, a1 = exact_value(S, rec).coords
    return float(a0) + float(a1) * (rec.coeffs[0] - rec.beta)


def abs_conjugate_sum(S: GameState, rec: Recurrence) -> float:
    """``sum_j S(j) |bt|^j``."""
    m = rec.beta_tilde_modulus
    return float(sum(n * m**i for i, n in S._cells.items()))

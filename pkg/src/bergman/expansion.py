"""Greedy base-beta expansions computed in exact arithmetic."""

from __future__ import annotations

import math

from .errors import CapExceeded, NegativeValue
from .recurrence import Recurrence
from .state import FieldElement, GameState, beta_power, field_compare, field_sign


def default_digit_cap(v: FieldElement, rec: Recurrence) -> int:
    bits = max((abs(c.numerator).bit_length() for c in v.coords), default=0)
    return 64 * (rec.k + bits)


def _top_index(v: FieldElement, rec: Recurrence) -> int:
    """Largest ``b`` with ``beta^b <= v`` for ``v > 0``."""
    x = v.real_value(rec)
    # float hint; exactness comes from the comparisons below
    b = math.floor(math.log(x) / math.log(rec.beta)) if x > 0 else 0
    while field_compare(beta_power(rec, b), v, rec) > 0:
        b -= 1
    while field_compare(beta_power(rec, b + 1), v, rec) <= 0:
        b += 1
    return b


def greedy_expand(v: FieldElement, rec: Recurrence, digit_cap: int | None = None) -> GameState:
    """Greedy expansion of ``v``: take the largest power of beta that fits, as often as it fits."""
    sign = field_sign(v, rec)
    if sign < 0:
        raise NegativeValue("cannot expand a negative value")
    if sign == 0:
        return GameState()
    cap = default_digit_cap(v, rec) if digit_cap is None else digit_cap
    cells: dict[int, int] = {}
    rem = v
    b = _top_index(v, rec)
    while True:
        if len(cells) >= cap:
            raise CapExceeded(f"no finite expansion within {cap} digits")
        p = beta_power(rec, b)
        d = 0
        while field_compare(p, rem, rec) <= 0:
            rem = rem - p
            d += 1
        cells[b] = d
        if rem.is_zero():
            return GameState(cells)
        # rem < beta^b now, so the next digit has a lower index
        b -= 1
        while field_compare(beta_power(rec, b), rem, rec) > 0:
            b -= 1


def expand_integer(n: int, rec: Recurrence) -> GameState:
    """Base-beta expansion of the positive integer ``n``."""
    if n < 0:
        raise NegativeValue(f"cannot expand {n}")
    if n == 0:
        raise ValueError("n must be >= 1")
    return greedy_expand(FieldElement.from_int(n, rec), rec)


def expansion_indices(S: GameState) -> list[int]:
    """Indices of the summands, one entry per chip, ascending."""
    return [i for i, c in S.items() for _ in range(c)]

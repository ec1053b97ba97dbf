"""The quantity m_n = inf |1 + v~(S)| over n-chip Bergman states on non-negative indices.

For the golden ratio the conjugate is ``psi = 1 - phi`` and
``psi^i = F(i-1) + F(i) psi``, so ``1 + v~(S)`` is an exact integer pair
``(A, B)`` meaning ``A + B psi``.  Its absolute value is evaluated as
``|A^2 + AB - B^2| / (A + B phi)``: the numerator is an exact integer and the
denominator has no cancellation, so small values keep full precision.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Iterator

from .errors import EnumerationOverflow, InvariantError
from .recurrence import BERGMAN
from .state import FieldElement, GameState, field_sign

PHI = BERGMAN.beta
DEFAULT_CAP = 10**8


def fib(i: int) -> int:
    """Fibonacci numbers with ``F(-1) = 1, F(0) = 0``."""
    if i == -1:
        return 1
    a, b = 0, 1
    for _ in range(i):
        a, b = b, a + b
    return a


def psi_power(i: int) -> tuple[int, int]:
    """``psi^i`` as ``(F(i-1), F(i))`` for ``i >= 0``."""
    return fib(i - 1), fib(i)


def prepped_state(n: int) -> GameState:
    """One summand at each odd index ``1, 3, ..., 2n-1``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return GameState({2 * j - 1: 1 for j in range(1, n + 1)})


def mn_closed_form(n: int) -> float:
    return PHI ** (-2 * n)


def one_plus_conjugate(S: GameState) -> tuple[int, int]:
    """``1 + v~(S)`` as the integer pair ``(A, B)``; indices must be non-negative."""
    A, B = 1, 0
    for i, c in S.items():
        if i < 0:
            raise ValueError("state has a summand at a negative index")
        a, b = psi_power(i)
        A += c * a
        B += c * b
    return A, B


def pair_abs(A: int, B: int) -> float:
    """``|A + B psi|`` for ``A + B phi > 0``."""
    return abs(A * A + A * B - B * B) / (A + B * PHI)


def _as_field(A: int, B: int) -> FieldElement:
    # A + B psi = (A + B) - B phi
    return FieldElement((Fraction(A + B), Fraction(-B)), BERGMAN.coeffs)


def compare_pairs(p: tuple[int, int], q: tuple[int, int]) -> int:
    """Exact sign of ``|p| - |q|`` through the squares in Z[phi]."""
    if p == q:
        return 0
    x, y = _as_field(*p), _as_field(*q)
    return field_sign(x * x - y * y, BERGMAN)


def prepped_check(n: int) -> bool:
    """``1 + v~(P^n) == psi^(2n)`` as integer pairs, i.e. ``|1 + v~(P^n)| = phi^(-2n)`` exactly."""
    return one_plus_conjugate(prepped_state(n)) == psi_power(2 * n)


def reduced_states(n: int, J: int, first: int | None = None) -> Iterator[tuple[tuple[int, ...], tuple[int, int]]]:
    """Reduced states (0/1 entries, no two adjacent ones) on ``[0, J]`` with at most ``n`` chips.

    Each state is yielded as its tuple of occupied indices with its pair
    ``(A, B)``.  With ``first`` given, only states whose leftmost summand is
    ``first`` are produced; ``first = -1`` stands for the empty state alone.
    """
    fa = [fib(i - 1) for i in range(J + 1)]
    fb = [fib(i) for i in range(J + 1)]
    chosen: list[int] = []

    def extend(start, A, B):
        yield tuple(chosen), (A, B)
        if len(chosen) == n:
            return
        for i in range(start, J + 1):
            chosen.append(i)
            yield from extend(i + 2, A + fa[i], B + fb[i])
            chosen.pop()

    if first is None:
        yield from extend(0, 1, 0)
    elif first == -1:
        yield (), (1, 0)
    elif n >= 1:
        chosen.append(first)
        yield from extend(first + 2, 1 + fa[first], fb[first])


def _search(n: int, J: int, first: int | None, cap: int):
    best = None
    count = 0
    for idx, pair in reduced_states(n, J, first):
        count += 1
        if count > cap:
            raise EnumerationOverflow(f"more than {cap} reduced states")
        if idx and pair == (1, 0):
            # a nonempty state with v~(S) = 0
            raise InvariantError(f"conjugate value vanishes on indices {idx}")
        if best is None or _better(pair, idx, best[1], best[0]):
            best = (idx, pair)
    return best, count


def _better(pair, idx, best_pair, best_idx) -> bool:
    a, b = pair_abs(*pair), pair_abs(*best_pair)
    if abs(a - b) > 1e-12 * max(a, b):
        return a < b
    c = compare_pairs(pair, best_pair)
    if c:
        return c < 0
    return idx < best_idx


def brute_force_mn(n: int, window_J: int | None = None, cap: int = DEFAULT_CAP,
                   workers: int = 1) -> tuple[float, GameState]:
    """Minimum of ``|1 + v~(S)|`` over reduced states in the window, with a minimizing state."""
    if n < 0:
        raise ValueError("n must be >= 0")
    J = 2 * n + 20 if window_J is None else window_J
    if J < 2 * n:
        raise ValueError(f"window {J} too small for the prepped state (needs >= {2 * n})")
    firsts = [-1] + list(range(J + 1))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_search, [n] * len(firsts), [J] * len(firsts), firsts,
                                  [cap] * len(firsts)))
    else:
        parts = [_search(n, J, f, cap) for f in firsts]
    if sum(c for _, c in parts) > cap:
        raise EnumerationOverflow(f"more than {cap} reduced states")
    best = None
    for part, _ in parts:
        if part is not None and (best is None or _better(part[1], part[0], best[1], best[0])):
            best = part
    idx, pair = best
    return pair_abs(*pair), GameState({i: 1 for i in idx})


def conjugate_plus(S: GameState) -> float:
    """``sum_j S(j) |psi|^j``."""
    return float(sum(c * (PHI - 1) ** i for i, c in S.items()))


def state_count(n: int, J: int) -> int:
    """Number of reduced states on ``[0, J]`` with at most ``n`` chips."""
    m = J + 1
    return sum(math.comb(m - j + 1, j) for j in range(n + 1) if m - j + 1 >= j)

"""Non-increasing positive linear recurrences and their derived constants.

A recurrence is given by its coefficients ``c_1 >= c_2 >= ... >= c_k >= 1``
(``k >= 2``) and has characteristic polynomial
``x^k - c_1 x^(k-1) - ... - c_k``.  Everything else about it (the dominating
root, its conjugates, the sums ``C_r``) is recomputed from the coefficients.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NotPisot, OutOfRange, RejectedCoefficients

PISOT_TOLERANCE = 1e-9
# bits of the dyadic bracket computed eagerly; enough for a double-precision beta
_INITIAL_BITS = 64
_MAX_FLOAT_BISECTIONS = 200


@dataclass(frozen=True)
class Recurrence:
    coeffs: tuple[int, ...]
    k: int
    C: tuple[int, int, int]
    beta: float
    conjugates: tuple[complex, ...]
    beta_tilde_modulus: float
    rho: float
    R: float
    # scratch space for exact-arithmetic caches (powers of beta, finer brackets)
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def c(self, j: int) -> int:
        """Coefficient ``c_j`` with the convention ``c_j = 0`` for ``j > k``."""
        if j < 1:
            raise OutOfRange(f"coefficient index must be >= 1, got {j}")
        return self.coeffs[j - 1] if j <= self.k else 0

    @property
    def C0(self) -> int:
        return self.C[0]

    @property
    def C1(self) -> int:
        return self.C[1]

    @property
    def beta_tilde(self) -> complex:
        """A conjugate of maximal modulus (non-negative imaginary part on ties)."""
        return max(self.conjugates, key=lambda z: (round(abs(z), 12), z.imag))

    @property
    def is_bergman(self) -> bool:
        return self.coeffs == (1, 1)

    def log_beta(self, x: float) -> float:
        return math.log(x) / math.log(self.beta)

    def log_rho(self, x: float) -> float:
        return math.log(x) / math.log(self.rho)

    def char_poly_at(self, x: float) -> float:
        acc = 1.0
        for cj in self.coeffs:
            acc = acc * x - cj
        return acc

    def beta_bracket(self, bits: int) -> tuple[int, int]:
        """Return ``(lo, e)`` with ``lo / 2**e < beta < (lo + 1) / 2**e`` and ``e >= bits``.

        Brackets are produced by exact bisection on the characteristic
        polynomial and cached, so repeated requests are cheap.
        """
        lo, e = self._cache["bracket"]
        if e >= bits:
            return lo, e
        while e < bits:
            mid = 2 * lo + 1
            e += 1
            if _scaled_char_poly(self.coeffs, mid, e) > 0:
                lo = 2 * lo
            else:
                lo = mid
        self._cache["bracket"] = (lo, e)
        return lo, e

    def to_json(self) -> str:
        return json.dumps({"coeffs": list(self.coeffs)})

    @classmethod
    def from_json(cls, text: str) -> "Recurrence":
        data = json.loads(text)
        return new_recurrence(data["coeffs"])

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coeffs)


def _scaled_char_poly(coeffs: Sequence[int], m: int, e: int) -> int:
    """``2**(e*k) * p(m / 2**e)`` computed in exact integers."""
    # Horner with every partial result scaled by 2^(e j)
    acc = 1
    scale = 1 << e
    for cj in coeffs:
        acc = acc * m - cj * scale
        scale <<= e
    return acc


def _dyadic_root(coeffs: Sequence[int], bits: int) -> tuple[int, int]:
    c1 = coeffs[0]
    # bracket at e = 0 is the integer interval (c1, c1 + 1)
    lo, e = c1, 0
    while e < bits:
        mid = 2 * lo + 1
        e += 1
        if _scaled_char_poly(coeffs, mid, e) > 0:
            lo = 2 * lo
        else:
            lo = mid
    return lo, e


def _float_bisect(coeffs: Sequence[int], lo: float, hi: float) -> float:
    def p(x: float) -> float:
        acc = 1.0
        for cj in coeffs:
            acc = acc * x - cj
        return acc

    for _ in range(_MAX_FLOAT_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-14 * lo or mid in (lo, hi):
            break
        if p(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def new_recurrence(coeffs: Sequence[int]) -> Recurrence:
    """Validate ``coeffs`` and build a :class:`Recurrence` with every constant populated."""
    try:
        cs = tuple(int(c) for c in coeffs)
    except (TypeError, ValueError) as exc:
        raise RejectedCoefficients(f"coefficients must be integers: {coeffs!r}") from exc
    if any(int(c) != c for c in coeffs):
        raise RejectedCoefficients(f"coefficients must be integers: {coeffs!r}")
    if len(cs) < 2:
        raise RejectedCoefficients(f"depth k >= 2 required, got {len(cs)}")
    if any(c < 1 for c in cs):
        raise RejectedCoefficients(f"all coefficients must be >= 1: {cs}")
    if any(a < b for a, b in zip(cs, cs[1:])):
        raise RejectedCoefficients(f"coefficients must be non-increasing: {cs}")

    k = len(cs)
    C = tuple(sum(j**r * c for j, c in enumerate(cs, start=1)) for r in range(3))

    lo, e = _dyadic_root(cs, _INITIAL_BITS)
    beta = _float_bisect(cs, lo / 2**e, (lo + 1) / 2**e)

    # deflate p(x) by (x - beta); the quotient carries the conjugates
    poly = [1.0] + [-float(c) for c in cs]
    quotient = [poly[0]]
    for a in poly[1:-1]:
        quotient.append(a + beta * quotient[-1])
    conjugates = tuple(complex(z) for z in np.roots(quotient))
    if not conjugates:
        raise NotPisot("no conjugate roots found")
    moduli = [abs(z) for z in conjugates]
    if max(moduli) >= 1 - PISOT_TOLERANCE:
        raise NotPisot(f"conjugate of modulus {max(moduli):.12g} for coefficients {cs}")
    bt = max(moduli)
    rho = 1.0 / bt
    R = math.log(beta) / math.log(rho)

    rec = Recurrence(
        coeffs=cs,
        k=k,
        C=C,
        beta=beta,
        conjugates=conjugates,
        beta_tilde_modulus=bt,
        rho=rho,
        R=R,
    )
    rec._cache["bracket"] = (lo, e)
    return rec


def d_coeff(rec: Recurrence, p: int, j: int) -> int:
    """``d_{p,j} = c_j - c_{j+p}``, the left-hand output of a type-``p`` split."""
    if not 1 <= p <= rec.k - 1:
        raise OutOfRange(f"split type p must lie in [1, {rec.k - 1}], got {p}")
    if not 1 <= j <= rec.k:
        raise OutOfRange(f"j must lie in [1, {rec.k}], got {j}")
    return rec.c(j) - rec.c(j + p)


def parse_coeffs(text: str) -> Recurrence:
    """Parse ``"1,1"`` style coefficient lists as used on the command line."""
    parts = [t for t in text.replace(" ", "").split(",") if t]
    try:
        values = [int(t) for t in parts]
    except ValueError as exc:
        raise RejectedCoefficients(f"cannot parse coefficients {text!r}") from exc
    return new_recurrence(values)


BERGMAN = new_recurrence([1, 1])

"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class BergmanError(Exception):
    """Base class for all errors raised by this package."""


class RejectedCoefficients(BergmanError, ValueError):
    """Coefficient list is not a non-increasing positive recurrence of depth >= 2."""


class NotPisot(BergmanError, ArithmeticError):
    """A conjugate root was found with modulus too close to (or above) one."""


class OutOfRange(BergmanError, IndexError):
    pass


class NegativeEntry(BergmanError, ValueError):
    """An operation would leave a negative summand count somewhere."""


class EmptyState(BergmanError, ValueError):
    pass


class IllegalMove(BergmanError, ValueError):
    pass


class WrongRecurrence(BergmanError, ValueError):
    """Strategy requested on a recurrence it is not defined for."""


class LimitExceeded(BergmanError, RuntimeError):
    """A game ran past its move limit.

    For the native engine this means a defect (termination is guaranteed);
    for generic locally-defined move sets it can be a legitimate outcome.
    ``trace`` holds the partial record when one is available.
    """

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


class CapExceeded(BergmanError, RuntimeError):
    pass


class NonIntegral(BergmanError, ValueError):
    pass


class BelowThreshold(BergmanError, ValueError):
    pass


class NegativeValue(BergmanError, ValueError):
    pass


class OutOfWindow(BergmanError, ValueError):
    pass


class EnumerationOverflow(BergmanError, RuntimeError):
    """Brute-force enumeration exceeded its configured state cap."""


class ParseError(BergmanError, ValueError):
    pass


class InvariantError(BergmanError, AssertionError):
    """An internal consistency check failed; always indicates a defect."""

"""Generalized Bergman Games: exact engine, strategies, bounds and experiments."""

from .errors import BergmanError
from .moves import COMBINE, SPLIT, Move, apply, is_terminal, legal_moves
from .recurrence import BERGMAN, Recurrence, new_recurrence, parse_coeffs
from .state import GameState, exact_value, format_state, parse_state, single
from .strategies import QT, SLCL, SLCR, RandomPlay, parse_strategy, play

__version__ = "0.1.0"

__all__ = [
    "BERGMAN",
    "COMBINE",
    "SPLIT",
    "BergmanError",
    "GameState",
    "Move",
    "QT",
    "RandomPlay",
    "Recurrence",
    "SLCL",
    "SLCR",
    "apply",
    "exact_value",
    "format_state",
    "is_terminal",
    "legal_moves",
    "new_recurrence",
    "parse_coeffs",
    "parse_state",
    "parse_strategy",
    "play",
    "single",
]

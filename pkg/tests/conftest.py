import random

import pytest
from hypothesis import settings, strategies as st

from bergman.recurrence import BERGMAN, new_recurrence
from bergman.state import GameState

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

RECURRENCES = [BERGMAN, new_recurrence([2, 1]), new_recurrence([1, 1, 1]), new_recurrence([3, 2, 1])]


def random_state(rng: random.Random, max_chips: int, lo: int = -4, hi: int = 4) -> GameState:
    n = rng.randint(1, max_chips)
    cells: dict[int, int] = {}
    for _ in range(n):
        i = rng.randint(lo, hi)
        cells[i] = cells.get(i, 0) + 1
    return GameState(cells)


@st.composite
def states(draw, max_chips=30, lo=-4, hi=4, min_chips=1):
    idx = draw(st.lists(st.integers(lo, hi), min_size=min_chips, max_size=max_chips))
    cells: dict[int, int] = {}
    for i in idx:
        cells[i] = cells.get(i, 0) + 1
    return GameState(cells)


@pytest.fixture
def rng():
    return random.Random(20211)


def pytest_terminal_summary(terminalreporter):
    lines = [value for key in ("passed", "failed") for rep in terminalreporter.stats.get(key, [])
             for name, value in rep.user_properties if name == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

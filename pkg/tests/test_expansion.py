import pytest
from hypothesis import given, strategies as st

from bergman.errors import CapExceeded, NegativeValue
from bergman.expansion import expand_integer, expansion_indices, greedy_expand
from bergman.moves import is_terminal
from bergman.recurrence import BERGMAN, new_recurrence
from bergman.state import FieldElement, GameState, beta_power, exact_value, make_state, single
from bergman.strategies import SLCR, RandomPlay, play

from conftest import RECURRENCES, states
from independent_oracle import phi_power, qadd, value

INDICES_2021 = [-16, -11, -6, -3, 1, 5, 10, 13, 15]


def test_2021():
    E = expand_integer(2021, BERGMAN)
    assert expansion_indices(E) == INDICES_2021
    # independent check in Z[phi]
    assert value(dict(E.items())) == (2021, 0)


def test_small_integers():
    assert expand_integer(1, BERGMAN) == single(0, 1)
    assert expand_integer(2, BERGMAN) == make_state(-2, [1, 0, 0, 1])
    six = expand_integer(6, BERGMAN)
    assert six.support() == [-4, 1, 3]
    # 6 - phi^3 - phi = 5 - 3 phi = phi^-4
    rest = qadd((6, 0), tuple(-x for x in qadd(phi_power(3), phi_power(1))))
    assert rest == (5, -3) == phi_power(-4)


def test_zero_and_negative():
    zero = FieldElement.from_int(0, BERGMAN)
    assert greedy_expand(zero, BERGMAN) == GameState()
    with pytest.raises(NegativeValue):
        greedy_expand(FieldElement.from_int(-1, BERGMAN), BERGMAN)
    with pytest.raises(NegativeValue):
        expand_integer(-3, BERGMAN)


def test_digit_cap():
    with pytest.raises(CapExceeded):
        greedy_expand(FieldElement.from_int(2021, BERGMAN), BERGMAN, digit_cap=3)


@given(st.sampled_from(RECURRENCES), states(max_chips=60, lo=-5, hi=5), st.integers(0, 1000))
def test_final_state_is_greedy_expansion(rec, S, seed):
    g = greedy_expand(exact_value(S, rec), rec)
    assert is_terminal(g, rec)
    assert play(S, SLCR, rec).final == g
    assert play(S, RandomPlay(seed), rec).final == g


@given(states(max_chips=200, lo=0, hi=5))
def test_bergman_final_left_bound(S):
    g = greedy_expand(exact_value(S, BERGMAN), BERGMAN)
    assert g.left >= -BERGMAN.log_beta(S.chips) - 2


@given(st.integers(1, 5000))
def test_integer_expansions_are_exact(n):
    E = expand_integer(n, BERGMAN)
    assert value(dict(E.items())) == (n, 0)
    assert max(c for _, c in E.items()) == 1

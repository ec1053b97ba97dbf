import math

import pytest
from hypothesis import given, strategies as st

from bergman.errors import EnumerationOverflow
from bergman.mn_oracle import (
    brute_force_mn,
    compare_pairs,
    conjugate_plus,
    fib,
    mn_closed_form,
    one_plus_conjugate,
    pair_abs,
    prepped_check,
    prepped_state,
    psi_power,
    reduced_states,
    state_count,
)
from bergman.moves import apply, combine_move
from bergman.recurrence import BERGMAN
from bergman.state import GameState, add, conjugate_value, single

from independent_oracle import phi_power

PHI = (1 + math.sqrt(5)) / 2


def test_closed_form_values():
    assert mn_closed_form(0) == 1.0
    assert mn_closed_form(1) == pytest.approx(0.381966011250105)
    assert mn_closed_form(3) == pytest.approx(0.0557280900008, abs=1e-12)


def test_prepped_state():
    assert prepped_state(0) == GameState()
    assert prepped_state(3).support() == [1, 3, 5]
    with pytest.raises(ValueError):
        prepped_state(-1)


@pytest.mark.parametrize("n", range(11))
def test_prepped_exact(n):
    assert prepped_check(n)
    # psi = 1 - phi is the conjugate; psi^(2n) in Z[phi] is phi^(2n) with phi -> 1-phi
    assert pair_abs(*one_plus_conjugate(prepped_state(n))) == pytest.approx(PHI ** (-2 * n), rel=1e-12)


def test_psi_power_independent():
    for i in range(12):
        a, b = psi_power(i)
        assert a + b * (1 - PHI) == pytest.approx((1 - PHI) ** i, abs=1e-12)
    assert [fib(i) for i in range(-1, 8)] == [1, 0, 1, 1, 2, 3, 5, 8, 13]


def test_prepped_combines_to_one_summand():
    # adding _0(1) to P^n lets the chain of combines collapse to _{2n}(1)
    for n in range(1, 6):
        S = add(prepped_state(n), single(0, 1))
        for j in range(1, n + 1):
            S = apply(S, combine_move(2 * j), BERGMAN)
        assert S == single(2 * n, 1)


def test_conjugate_plus():
    for n in range(8):
        assert conjugate_plus(prepped_state(n)) == pytest.approx(
            sum((PHI - 1) ** (2 * j - 1) for j in range(1, n + 1)))
    # sum of |psi|^(2j-1) over j <= n is 1 - |psi|^(2n)
    assert conjugate_plus(prepped_state(6)) == pytest.approx(1 - (PHI - 1) ** 12)


@given(st.sets(st.integers(0, 30), max_size=8))
def test_pair_agrees_with_conjugate_value(idx):
    S = GameState({i: 1 for i in idx})
    A, B = one_plus_conjugate(S)
    assert A + B * (1 - PHI) == pytest.approx(1 + conjugate_value(S, BERGMAN).real, abs=1e-9)


def test_compare_pairs():
    assert compare_pairs((1, 0), (1, 0)) == 0
    assert compare_pairs(psi_power(4), psi_power(2)) < 0
    assert compare_pairs(psi_power(2), psi_power(4)) > 0


@pytest.mark.parametrize("n", range(6))
def test_brute_force(n):
    value, witness = brute_force_mn(n, 2 * n + 20)
    assert abs(value - mn_closed_form(n)) < 1e-9
    assert witness == prepped_state(n)


def test_reduced_state_count():
    for n, J in [(2, 6), (3, 9), (4, 10)]:
        assert sum(1 for _ in reduced_states(n, J)) == state_count(n, J)
    assert list(reduced_states(2, 4, -1)) == [((), (1, 0))]


def test_overflow_and_window():
    with pytest.raises(EnumerationOverflow):
        brute_force_mn(4, 28, cap=1000)
    with pytest.raises(ValueError):
        brute_force_mn(3, 5)
    with pytest.raises(ValueError):
        one_plus_conjugate(single(-1, 1))


def test_phi_power_oracle_consistent():
    a, b = phi_power(-2)
    assert a + b * PHI == pytest.approx(PHI ** -2)

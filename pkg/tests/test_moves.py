import random

import pytest
from hypothesis import given, strategies as st

from bergman.errors import IllegalMove, NegativeEntry
from bergman.moves import (
    COMBINE,
    SPLIT,
    Move,
    MoveTable,
    apply,
    chunk_decompose,
    combine_move,
    is_terminal,
    legal_combines,
    legal_moves,
    legal_splits,
    split_move,
    unapply,
)
from bergman.recurrence import BERGMAN, new_recurrence
from bergman.state import GameState, exact_value, make_state, max_gap, single

from conftest import RECURRENCES, states

TRIB = new_recurrence([1, 1, 1])


def test_combine_examples():
    assert legal_combines(make_state(-2, [1, 1]), BERGMAN) == [combine_move(0)]
    assert legal_combines(make_state(-2, [1, 0, 0, 1]), BERGMAN) == []
    assert legal_combines(make_state(-3, [1, 1, 1]), TRIB) == [combine_move(0)]


def test_split_examples():
    assert legal_splits(single(0, 2), BERGMAN) == [split_move(0, 1)]
    assert legal_splits(make_state(0, [2, 1]), TRIB) == [split_move(0, 1)]
    assert legal_splits(make_state(0, [1, 1]), BERGMAN) == []


def test_apply_examples():
    assert apply(single(0, 2), split_move(0), BERGMAN) == make_state(-2, [1, 0, 0, 1])
    assert apply(make_state(-2, [1, 1]), combine_move(0), BERGMAN) == single(0, 1)
    assert apply(single(0, 2), split_move(0), TRIB) == make_state(-3, [1, 0, 0, 0, 1])
    with pytest.raises(IllegalMove):
        apply(single(0, 1), split_move(0), BERGMAN)
    with pytest.raises(IllegalMove):
        # type 2 is masked by the legal type 1 at the same index
        apply(make_state(0, [2, 1]), split_move(0, 2), TRIB)


def test_unapply_examples():
    assert unapply(single(0, 1), combine_move(0), BERGMAN) == make_state(-2, [1, 1])
    with pytest.raises(NegativeEntry):
        unapply(single(0, 1), split_move(0), BERGMAN)


def test_terminal_examples():
    assert is_terminal(make_state(-4, [1, 0, 0, 0, 0, 1, 0, 1]), BERGMAN)
    assert legal_moves(single(0, 6), BERGMAN) == [split_move(0)]
    assert is_terminal(GameState(), BERGMAN)


def test_chunks():
    S = GameState.from_counts(0, [1, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1])
    assert len(chunk_decompose(S, BERGMAN)) == 3
    assert len(chunk_decompose(single(0, 5), BERGMAN)) == 1
    assert chunk_decompose(GameState(), BERGMAN) == []


def test_move_round_trip_json():
    for m in (combine_move(-3), split_move(4, 2)):
        assert Move.from_dict(m.to_dict()) == m
    with pytest.raises(ValueError):
        Move(SPLIT, 0)
    with pytest.raises(ValueError):
        Move(COMBINE, 0, 1)


@given(st.sampled_from(RECURRENCES), states(max_chips=25), st.randoms(use_true_random=False))
def test_move_laws(rec, S, rnd):
    """Value, chips, index sum and gap behave as the lemmas say on every move."""
    k, C0, C1 = rec.k, rec.C0, rec.C1
    v = exact_value(S, rec)
    left0 = S.left
    for _ in range(40):
        ms = legal_moves(S, rec)
        assert len(set(ms)) == len(ms)
        assert len({m.index for m in ms if m.kind is SPLIT}) == sum(m.kind is SPLIT for m in ms)
        if not ms:
            assert is_terminal(S, rec)
            break
        m = rnd.choice(ms)
        T = apply(S, m, rec)
        assert exact_value(T, rec) == v
        if m.kind is COMBINE:
            assert T.chips - S.chips == -(C0 - 1)
            assert T.index_sum - S.index_sum == -m.index * (C0 - 1) + C1
            assert max_gap(T) <= max_gap(S) + k
        else:
            assert T.chips == S.chips
            assert T.index_sum - S.index_sum == -m.p * (C0 - 1)
            assert max(max_gap(T), k) <= max(max_gap(S), k)
        assert unapply(T, m, rec) == S
        assert T.right >= left0
        assert T.right <= rec.log_beta(v.real_value(rec)) + 1e-9
        S = T


@given(st.sampled_from(RECURRENCES), states(max_chips=40, lo=-6, hi=6), st.integers(0, 2**32))
def test_incremental_table_matches_enumeration(rec, S, seed):
    rnd = random.Random(seed)
    table = MoveTable(S.copy(), rec)
    for _ in range(200):
        table.verify()
        if not len(table):
            break
        table.play(table.nth(rnd.randrange(len(table))))
    table.state.check_aggregates()

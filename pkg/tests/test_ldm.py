import json
import random

import pytest

from bergman.errors import LimitExceeded, OutOfWindow, ParseError
from bergman.ldm import (
    LdmMove,
    LdmMoveSet,
    Mass,
    RandomChooser,
    Span,
    bergman_move_set,
    check_termination,
    classify_mass,
    classify_span,
    generic_play,
    load_move_set,
    monovariant_f,
    move_set_from_json,
    move_set_to_json,
    native_move_set,
    random_move_set,
    random_state,
    termination_bound,
)
from bergman.recurrence import BERGMAN, new_recurrence
from bergman.state import GameState, make_state, parse_state, single
from bergman.strategies import SLCR, play


def mv(a, b, tc=True):
    return LdmMove(parse_state(a), parse_state(b), tc)


SPLIT = mv("_0(2)", "_-2(1,0,0,1)")
COMBINE = mv("_-2(1,1)", "_0(1)")
SHIFT = LdmMoveSet([mv("_0(1)", "_1(1)")])


def test_mass():
    assert classify_mass(SPLIT) is Mass.CONSERVATIVE
    assert classify_mass(COMBINE) is Mass.DECREASING
    assert classify_mass(mv("_0(1)", "_0(3)")) is Mass.INCREASING


def test_span():
    assert classify_span(SPLIT) is Span.GSM
    assert classify_span(mv("_0(2)", "_0(1,1)")) is Span.GRSM
    assert classify_span(mv("_0(1,1)", "_0(2)")) is Span.NEITHER
    assert classify_span(mv("_0(2)", "_-1(1,1)")) is Span.GLSM
    assert classify_span(SHIFT.moves[0]) is Span.NEITHER


def test_move_validation():
    with pytest.raises(ValueError):
        LdmMove(GameState(), single(0, 1))
    with pytest.raises(ValueError):
        mv("_0(2)", "_0(2)")


def test_termination_verdicts():
    v = check_termination(bergman_move_set())
    assert v.terminates and v.status == "Terminates" and "^w" in v.bound_formula
    assert not check_termination(LdmMoveSet([SPLIT, mv("_0(1)", "_0(3)")])).terminates
    mixed = LdmMoveSet([mv("_0(2)", "_0(1,1)"), mv("_0(2)", "_-1(1,1)")])
    assert check_termination(mixed).status == "Unknown"
    assert not check_termination(SHIFT).terminates
    assert check_termination(LdmMoveSet([])).terminates


def test_set_aggregates():
    ms = bergman_move_set()
    assert ms.max_chips == 2 and ms.g_M == 2


def test_monovariant_examples():
    assert monovariant_f(single(0, 1), 3, (0, 4)) == 1
    assert monovariant_f(GameState(), 3, (0, 4)) == 0
    assert monovariant_f(single(4, 1), 3, (0, 4), mirrored=True) == 1
    with pytest.raises(OutOfWindow):
        monovariant_f(single(5, 1), 3, (0, 4))


@pytest.mark.parametrize("n", [2, 3, 6, 9])
def test_bergman_set_matches_native_engine(n):
    t = generic_play(single(0, n), bergman_move_set(), RandomChooser(n))
    assert t.final == play(single(0, n), SLCR, BERGMAN).final


def test_native_set_other_depth2():
    rec = new_recurrence([2, 1])
    ms = native_move_set(rec)
    assert check_termination(ms).terminates
    assert generic_play(single(0, 7), ms).final == play(single(0, 7), SLCR, rec).final
    with pytest.raises(ValueError):
        native_move_set(new_recurrence([1, 1, 1]))


def test_shift_hits_limit():
    with pytest.raises(LimitExceeded) as info:
        generic_play(single(0, 1), SHIFT, move_limit=500)
    assert info.value.trace.length == 500
    assert info.value.trace.final == single(500, 1)


def test_empty_set_plays_nothing():
    t = generic_play(single(0, 3), LdmMoveSet([]))
    assert t.length == 0 and t.final == single(0, 3)


def test_non_translation_move_only_in_place():
    ms = LdmMoveSet([mv("_0(2)", "_-2(1,0,0,1)", tc=False)])
    assert generic_play(single(5, 2), ms).length == 0
    assert generic_play(single(0, 2), ms).final == make_state(-2, [1, 0, 0, 1])


def test_json_round_trip(tmp_path):
    ms = bergman_move_set()
    p = tmp_path / "set.json"
    p.write_text(move_set_to_json(ms))
    back = load_move_set(p)
    assert [(m.initial, m.final) for m in back.moves] == [(m.initial, m.final) for m in ms.moves]
    text = json.dumps([{"initial": "_0(1)", "final": "_1(1)", "translation_class": False}])
    assert not move_set_from_json(text).moves[0].translation_class
    with pytest.raises(ParseError):
        move_set_from_json('{"initial": 1}')
    with pytest.raises(ParseError):
        move_set_from_json('[{"final": "_0(1)"}]')


def test_random_sets_halt_and_monovariant_grows():
    rng = random.Random(2024)
    for _ in range(150):
        ms = random_move_set(rng)
        assert check_termination(ms).terminates
        spans = {classify_span(m) for m in ms.moves if classify_mass(m) is Mass.CONSERVATIVE}
        mirrored = not spans <= {Span.GRSM, Span.GSM}
        S = random_state(rng)
        t = generic_play(S, ms, RandomChooser(rng.randrange(10**6)))
        w = t.max_right - t.min_left
        assert t.length <= termination_bound(S.chips, ms, w)
        window = (t.min_left, t.max_right)
        states = t.states(ms)
        for (k, _), a, b in zip(t.moves, states, states[1:]):
            if classify_mass(ms.moves[k]) is Mass.CONSERVATIVE:
                assert monovariant_f(b, ms, window, mirrored) > monovariant_f(a, ms, window, mirrored)

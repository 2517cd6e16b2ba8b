import random

import pytest
from hypothesis import given, settings, strategies as st

from orthopack.binsorting import (
    IllegalMove,
    SortGame,
    first_fit_leftmost,
    format_trace,
    middle_slot_algorithm,
    parse_trace,
    play_presenter,
    play_sequence,
    presenter_next,
    presenter_start,
    random_algorithm,
    sort_lower_bound,
    sort_opt,
)


def test_sort_opt():
    assert sort_opt(5, 5) == 1
    assert sort_opt(0, 4) == 0
    assert sort_opt(7, 3) == 3
    with pytest.raises(ValueError):
        sort_opt(3, 0)


def test_lower_bound_formula():
    assert sort_lower_bound(8, 8) == 3
    assert sort_lower_bound(12, 12) == 4
    assert sort_lower_bound(5, 1) == 5


def test_presenter_start():
    st5, a = presenter_start(5)
    assert a == 16 and (st5.l, st5.r) == (0, 32)
    assert presenter_start(1)[1] == 1
    st3, a = presenter_start(3)
    assert a == 4 and (st3.l, st3.r) == (0, 8) and st3.active_size == 7


def scripted(moves):
    it = iter(moves)

    def choose(game, number):
        return next(it)

    return choose


def test_presenter_follows_smaller_section():
    # 16 mid-array (tie: left), 8 in slot 0 (left), 4 and 2 forced into new arrays
    alg = scripted([(0, 2), (0, 0), (1, 0), (2, 4), (3, 0)])
    match = play_presenter(5, 5, alg)
    assert match.numbers == [16, 8, 4, 2, 3]


def test_presenter_tie_goes_left():
    game = SortGame(3)
    state, a = presenter_start(3)
    game.place(a, 0, 1)
    state, b = presenter_next(state, game)
    assert b == 2 and (state.l, state.r) == (0, 4)


def test_presenter_rejects_foreign_last_move():
    game = SortGame(3)
    state, a = presenter_start(3)
    game.place(a + 1, 0, 1)
    with pytest.raises(IllegalMove):
        presenter_next(state, game)


def test_middle_slot_examples():
    assert middle_slot_algorithm(SortGame(5), 16) == (0, 2)
    g = play_sequence([3, 1, 2, 5, 4], 1, middle_slot_algorithm)
    assert g.array_count == 5
    m = play_presenter(5, 5, middle_slot_algorithm)
    assert m.arrays == 3 == sort_lower_bound(5, 5)


def test_illegal_moves():
    g = SortGame(3)
    g.place(5, 0, 1)
    with pytest.raises(IllegalMove):
        g.place(7, 0, 0)  # 7 left of 5
    with pytest.raises(IllegalMove):
        g.place(5, 1, 0)  # repeated number
    with pytest.raises(IllegalMove):
        g.place(1, 0, 1)  # occupied
    with pytest.raises(IllegalMove):
        g.place(1, 3, 0)  # skips an array index
    g.place(1, 0, 0)
    assert g.check_sorted()


@pytest.mark.parametrize("n", [1, 4, 9, 14, 20])
@pytest.mark.parametrize("k", [1, 3, 7, 15, None])
def test_presenter_forces_bound(n, k):
    k = k or n
    algorithms = [middle_slot_algorithm, first_fit_leftmost] + [random_algorithm(s) for s in range(5)]
    for alg in algorithms:
        assert play_presenter(n, k, alg).arrays >= sort_lower_bound(n, k)


@settings(max_examples=200)
@given(st.integers(1, 50), st.sampled_from([1, 2, 3, 5, 7, 15, 31]), st.randoms(use_true_random=False))
def test_middle_slot_upper_bound(n, k, rng):
    numbers = rng.sample(range(10 * n), n)
    game = play_sequence(numbers, k, middle_slot_algorithm)
    assert game.check_sorted()
    assert game.array_count <= sort_lower_bound(n, k)


def test_trace_round_trip():
    m = play_presenter(6, 4, random_algorithm(3))
    text = format_trace(m.game)
    rows = parse_trace(text)
    assert [r[0] for r in rows] == list(range(1, 7))
    assert [(num, arr, slot) for _, num, arr, slot in rows] == m.game.history
    assert text.splitlines()[0] == f"1, 32, {rows[0][2]}, {rows[0][3]}"

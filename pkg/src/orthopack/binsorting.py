"""The BinSorting[k] game.

Numbers arrive online and must be written into one of several arrays of
``k`` slots so that the filled slots of every array increase from left to
right.  The objective is the number of arrays used.

Slots are 0-based throughout; trace lines use the same convention.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Tuple

__all__ = [
    "IllegalMove",
    "SortGame",
    "PresenterState",
    "sort_opt",
    "sort_lower_bound",
    "presenter_start",
    "presenter_next",
    "middle_slot_algorithm",
    "first_fit_leftmost",
    "random_algorithm",
    "play_presenter",
    "format_trace",
    "parse_trace",
]


class IllegalMove(ValueError):
    """A number was put into a slot that breaks the increasing order."""


def floor_log2_int(v: int) -> int:
    return v.bit_length() - 1


def sort_opt(n: int, k: int) -> int:
    """Offline optimum: sorted insertion fills arrays completely."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    return -(-n // k)


def sort_lower_bound(n: int, k: int) -> int:
    """Arrays the presenter forces, and middle-slot never exceeds: ceil(n / floor(log2(k+1)))."""
    return -(-n // floor_log2_int(k + 1))


@dataclass
class SortGame:
    k: int
    arrays: List[List[Optional[int]]] = field(default_factory=list)
    history: List[Tuple[int, int, int]] = field(default_factory=list)  # (number, array, slot)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        self._placed = {num for num, _, _ in self.history}

    @property
    def n_presented(self) -> int:
        return len(self.history)

    @property
    def array_count(self) -> int:
        return len(self.arrays)

    def section(self, array: int, number: int) -> Optional[Tuple[int, int]]:
        """Inclusive slot range where ``number`` may go in ``array``, or None."""
        slots = self.arrays[array]
        lo, hi = 0, self.k - 1
        for idx, v in enumerate(slots):
            if v is None:
                continue
            if v < number:
                lo = idx + 1
            elif v > number:
                hi = idx - 1
                break
            else:
                return None
        if lo > hi:
            return None
        return lo, hi

    def legal_arrays(self, number: int) -> List[Tuple[int, Tuple[int, int]]]:
        out = []
        for a in range(len(self.arrays)):
            sec = self.section(a, number)
            if sec is not None:
                out.append((a, sec))
        return out

    def place(self, number: int, array: int, slot: int) -> None:
        """Write ``number``; ``array == array_count`` opens a new array."""
        if number in self._placed:
            raise IllegalMove(f"{number} was already presented")
        if array == len(self.arrays):
            self.arrays.append([None] * self.k)
        elif not 0 <= array < len(self.arrays):
            raise IllegalMove(f"array {array} does not exist")
        if not 0 <= slot < self.k:
            raise IllegalMove(f"slot {slot} outside 0..{self.k - 1}")
        sec = self.section(array, number)
        if sec is None or not sec[0] <= slot <= sec[1]:
            raise IllegalMove(f"{number} cannot go to array {array} slot {slot}")
        self.arrays[array][slot] = number
        self._placed.add(number)
        self.history.append((number, array, slot))

    def check_sorted(self) -> bool:
        for arr in self.arrays:
            vals = [v for v in arr if v is not None]
            if any(a >= b for a, b in zip(vals, vals[1:])):
                return False
        return True


# ---------------------------------------------------------------------------
# algorithms: (game, number) -> (array, slot)


def middle_slot_algorithm(game: SortGame, number: int) -> Tuple[int, int]:
    """First array with room; the middle slot of the free section."""
    for a in range(len(game.arrays)):
        sec = game.section(a, number)
        if sec is not None:
            return a, (sec[0] + sec[1]) // 2
    return len(game.arrays), (game.k - 1) // 2


def first_fit_leftmost(game: SortGame, number: int) -> Tuple[int, int]:
    for a in range(len(game.arrays)):
        sec = game.section(a, number)
        if sec is not None:
            return a, sec[0]
    return len(game.arrays), 0


def random_algorithm(seed: int) -> Callable[[SortGame, int], Tuple[int, int]]:
    """Uniform choice among all legal (array, slot) pairs, a new array included."""
    rng = random.Random(seed)

    def choose(game: SortGame, number: int) -> Tuple[int, int]:
        options = [(a, s) for a, (lo, hi) in game.legal_arrays(number) for s in range(lo, hi + 1)]
        options += [(len(game.arrays), s) for s in range(game.k)]
        return rng.choice(options)

    return choose


# ---------------------------------------------------------------------------
# presenter


@dataclass
class PresenterState:
    n: int
    i: int  # index of the number last emitted (1-based)
    l: int
    r: int
    a: int

    @property
    def active_size(self) -> int:
        return self.r - self.l - 1


def presenter_start(n: int) -> Tuple[PresenterState, int]:
    if n < 1:
        raise ValueError("horizon must be at least 1")
    a1 = 1 << (n - 1)
    return PresenterState(n=n, i=1, l=0, r=1 << n, a=a1), a1


def presenter_next(state: PresenterState, game: SortGame) -> Tuple[PresenterState, int]:
    """Next number after the game recorded where ``state.a`` went.

    The active interval shrinks toward the smaller free part of the section
    that received ``a_i``; equal parts count as left.
    """
    if state.i >= state.n:
        raise ValueError("presenter horizon exhausted")
    if not game.history or game.history[-1][0] != state.a:
        raise IllegalMove("the last move must place the presented number")
    number, array, slot = game.history[-1]
    # section of a_i before it was placed: neighbours in the array now
    row = game.arrays[array]
    lo = slot
    while lo > 0 and row[lo - 1] is None:
        lo -= 1
    hi = slot
    while hi < game.k - 1 and row[hi + 1] is None:
        hi += 1
    left, right = slot - lo, hi - slot
    step = 1 << (state.n - state.i - 1)
    if left <= right:
        nxt = PresenterState(state.n, state.i + 1, state.l, state.a, state.a - step)
    else:
        nxt = PresenterState(state.n, state.i + 1, state.a, state.r, state.a + step)
    return nxt, nxt.a


def similar_invariant(state: PresenterState, game: SortGame) -> bool:
    """No placed number lies strictly inside the active interval, so every
    active number sees the same free section in every array."""
    return all(not state.l < num < state.r for num, _, _ in game.history)


@dataclass
class SortMatch:
    game: SortGame
    numbers: List[int]

    @property
    def arrays(self) -> int:
        return self.game.array_count


def play_presenter(n: int, k: int, algorithm, check_invariant: bool = True) -> SortMatch:
    """Run the presenter for ``n`` rounds against ``algorithm``."""
    game = SortGame(k)
    state, number = presenter_start(n)
    numbers = [number]
    while True:
        if check_invariant and not (state.l < number < state.r and similar_invariant(state, game)):
            raise AssertionError("presenter invariant broken")
        array, slot = algorithm(game, number)
        game.place(number, array, slot)
        if state.i == state.n:
            break
        state, number = presenter_next(state, game)
        numbers.append(number)
    return SortMatch(game, numbers)


def play_sequence(numbers: Iterable[int], k: int, algorithm) -> SortGame:
    game = SortGame(k)
    for num in numbers:
        array, slot = algorithm(game, num)
        game.place(num, array, slot)
    return game


def format_trace(game: SortGame) -> str:
    return "".join(f"{i}, {num}, {arr}, {slot}\n" for i, (num, arr, slot) in enumerate(game.history, 1))


def parse_trace(text: str) -> List[Tuple[int, int, int, int]]:
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        parts = [int(p) for p in line.split(",")]
        if len(parts) != 4:
            raise ValueError(f"bad trace line: {line!r}")
        rows.append(tuple(parts))
    return rows

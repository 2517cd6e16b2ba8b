"""Online colouring of open intervals with at most ``3*omega - 2`` colours.

Each new interval gets the smallest level ``m`` such that, together with the
intervals already on levels ``<= m``, no point is covered more than ``m``
times.  Level 1 is an independent set and uses colour 0; every higher level
induces paths, so first-fit over a private palette of three colours suffices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from .rational import as_q


@dataclass
class ColoredInterval:
    lo: Fraction
    hi: Fraction
    level: int
    color: int


def _meets(alo, ahi, blo, bhi) -> bool:
    return alo < bhi and blo < ahi and alo < ahi and blo < bhi


def max_point_load(intervals: Sequence[Tuple[Fraction, Fraction]]) -> int:
    """Largest number of open intervals sharing a point."""
    events = []
    for lo, hi in intervals:
        if lo < hi:
            events.append((lo, 1))
            events.append((hi, -1))
    # closing before opening at equal coordinates: open intervals do not meet there
    events.sort(key=lambda e: (e[0], e[1]))
    best = cur = 0
    for _, d in events:
        cur += d
        best = max(best, cur)
    return best


@dataclass
class IntervalColorer:
    intervals: List[ColoredInterval] = field(default_factory=list)

    def _level(self, lo: Fraction, hi: Fraction) -> int:
        if lo >= hi:
            return 1
        overlapping = [iv for iv in self.intervals if _meets(lo, hi, iv.lo, iv.hi)]
        cuts = sorted({lo, hi} | {p for iv in overlapping for p in (iv.lo, iv.hi) if lo < p < hi})
        # levels of the intervals covering each elementary piece of (lo, hi)
        pieces = []
        for p, q in zip(cuts, cuts[1:]):
            pieces.append(sorted(iv.level for iv in overlapping if iv.lo <= p and iv.hi >= q))
        m = 1
        while True:
            load = max(sum(1 for lv in levels if lv <= m) for levels in pieces)
            if load + 1 <= m:
                return m
            m += 1

    def color(self, lo, hi) -> int:
        lo, hi = as_q(lo), as_q(hi)
        if hi < lo:
            raise ValueError("interval with hi < lo")
        level = self._level(lo, hi)
        if level == 1:
            col = 0
        else:
            base = 1 + 3 * (level - 2)
            taken = {iv.color for iv in self.intervals if iv.level == level and _meets(lo, hi, iv.lo, iv.hi)}
            free = [c for c in range(base, base + 3) if c not in taken]
            if not free:
                raise AssertionError("level palette exhausted")
            col = free[0]
        self.intervals.append(ColoredInterval(lo, hi, level, col))
        return col

    @property
    def colors_used(self) -> int:
        return len({iv.color for iv in self.intervals})

    @property
    def omega(self) -> int:
        return max_point_load([(iv.lo, iv.hi) for iv in self.intervals])

    def is_proper(self) -> bool:
        ivs = self.intervals
        for i in range(len(ivs)):
            for j in range(i + 1, len(ivs)):
                a, b = ivs[i], ivs[j]
                if a.color == b.color and _meets(a.lo, a.hi, b.lo, b.hi):
                    return False
        return True

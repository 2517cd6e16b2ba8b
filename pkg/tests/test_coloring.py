from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from orthopack.coloring import IntervalColorer, max_point_load


def brute_load(intervals):
    """Count coverage at every midpoint between consecutive endpoints."""
    pts = sorted({p for iv in intervals for p in iv})
    best = 0
    for a, b in zip(pts, pts[1:]):
        m = (a + b) / 2
        best = max(best, sum(1 for lo, hi in intervals if lo < m < hi))
    return best


interval = st.tuples(st.integers(0, 40), st.integers(1, 15)).map(lambda t: (F(t[0], 4), F(t[0] + t[1], 4)))


@settings(max_examples=300)
@given(st.lists(interval, max_size=40))
def test_coloring_proper_and_within_three_omega(intervals):
    c = IntervalColorer()
    for lo, hi in intervals:
        c.color(lo, hi)
    assert c.is_proper()
    assert c.omega == brute_load(intervals) == max_point_load(intervals)
    assert c.colors_used <= 3 * c.omega


def test_disjoint_intervals_share_one_color():
    c = IntervalColorer()
    cols = {c.color(i, i + 1) for i in range(10)}
    assert cols == {0}


def test_nested_intervals():
    for m in (1, 3, 7):
        c = IntervalColorer()
        for i in range(m):
            c.color(F(i, 100), 1 - F(i, 100))
        assert m <= c.colors_used <= 3 * m
        assert c.omega == m


def test_touching_intervals_do_not_conflict():
    assert max_point_load([(0, 1), (1, 2)]) == 1
    c = IntervalColorer()
    assert c.color(0, 1) == c.color(1, 2)

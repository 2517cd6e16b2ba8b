from fractions import Fraction as F
import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from orthopack.adversaries import lk_shape, pack_lk_descending, lk_stack_packing
from orthopack.geometry import (
    Box,
    GravityStack,
    LShape,
    LSkeleton,
    Packing,
    Placement,
    Rect,
    ZShape,
    ZSkeleton,
    fits_on_stack,
    gravity_diagonal_positions,
    interior_disjoint,
    is_stacked,
    skeleton_disjoint,
    split_rotational_packing,
    validate_packing,
)
from orthopack.rational import as_q, floor_log2, format_q, parse_q, pow2

D = 8  # grid resolution for the oracles


# ---------------------------------------------------------------------------
# rationals


@given(st.integers(-10**30, 10**30), st.integers(1, 10**30))
def test_rational_string_round_trip(p, q):
    v = F(p, q)
    assert parse_q(format_q(v)) == v
    assert "/" not in format_q(v) or v.denominator != 1


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_q(0.5)
    with pytest.raises(TypeError):
        as_q(True)
    assert as_q("3/6") == F(1, 2)


@given(st.fractions(min_value=F(1, 10**9), max_value=F(10**9)))
def test_floor_log2(v):
    e = floor_log2(v)
    assert pow2(e) <= v < pow2(e + 1)


# ---------------------------------------------------------------------------
# raster oracle for solids: cells of a 1/D grid covered by each rectangle


def raster(boxes):
    cells = set()
    for x0, y0, x1, y1 in boxes:
        for i in range(int(x0 * D), int(x1 * D)):
            for j in range(int(y0 * D), int(y1 * D)):
                cells.add((i, j))
    return cells


def oracle_l_rects(s, x, y):
    return [(x, y, x + s.lx, y + s.wy), (x, y, x + s.wx, y + s.ly)]


def oracle_z_rects(z, x, y):
    base = y - z.a
    return [
        (x, base, x + z.w, base + z.t),
        (x, base, x + z.t_a, y),
        (x + z.w - z.t_b, base + z.t - z.b, x + z.w, base + z.t),
    ]


grid = st.integers(0, D).map(lambda i: F(i, D))
pos = st.integers(0, 2 * D).map(lambda i: F(i, D))


@st.composite
def grid_lshape(draw):
    lx, ly = draw(grid), draw(grid)
    wx = draw(st.integers(0, int(lx * D))) / F(D)
    wy = draw(st.integers(0, int(ly * D))) / F(D)
    return LShape(lx, wx, ly, wy)


@st.composite
def grid_zshape(draw):
    w, a, b, t = draw(grid), draw(grid), draw(grid), draw(grid)
    ta = draw(st.integers(0, int(w * D))) / F(D)
    tb = draw(st.integers(0, int(w * D))) / F(D)
    return ZShape(w, a, b, ta, tb, t)


def oracle_rects(s, x, y):
    if isinstance(s, LShape):
        return oracle_l_rects(s, x, y)
    if isinstance(s, ZShape):
        return oracle_z_rects(s, x, y)
    return [(x, y, x + s.width, y + s.height)]


solid = st.one_of(grid_lshape(), grid_zshape(), st.builds(Rect, grid, grid))


@settings(max_examples=300)
@given(solid, pos, pos, solid, pos, pos)
def test_interior_disjoint_matches_raster(a, ax, ay, b, bx, by):
    pa, pb = Placement(0, ax, ay), Placement(0, bx, by)
    expected = not (raster(oracle_rects(a, ax, ay)) & raster(oracle_rects(b, bx, by)))
    assert interior_disjoint(a, pa, b, pb) == expected
    assert interior_disjoint(b, pb, a, pa) == expected


def test_interior_disjoint_examples():
    sq = Rect(F(1, 2), F(1, 2))
    assert interior_disjoint(sq, Placement(0, 0, 0), sq, Placement(0, F(1, 2), 0))
    assert not interior_disjoint(lk_shape(1, 8), Placement(0, 0, 0), lk_shape(3, 8), Placement(0, F(7, 16), 0))
    s = LShape(F(3, 5), F(1, 10), F(3, 5), F(1, 10))
    assert interior_disjoint(s, Placement(0, 0, 0), s, Placement(0, F(1, 10), F(1, 10)))
    # different bins never conflict
    assert interior_disjoint(sq, Placement(0, 0, 0), sq, Placement(1, 0, 0))


# ---------------------------------------------------------------------------
# segment oracle for skeletons: sample every 1/(2D) along each segment


def sample(segments):
    pts = set()
    for (x0, y0), (x1, y1) in segments:
        steps = int(max(x1 - x0, y1 - y0) * 2 * D)
        for s in range(steps + 1):
            t = F(s, steps) if steps else F(0)
            pts.add((x0 + (x1 - x0) * t, y0 + (y1 - y0) * t))
    return pts


def extreme_points(pts):
    out = set()
    for key in (lambda p: p[0], lambda p: -p[0], lambda p: p[1], lambda p: -p[1]):
        best = min(key(p) for p in pts)
        hit = [p for p in pts if key(p) == best]
        if len(hit) == 1:
            out.add(hit[0])
    return out


def oracle_skel_segments(s, x, y):
    if isinstance(s, LSkeleton):
        return [((x, y), (x + s.lx, y)), ((x, y), (x, y + s.ly))]
    base = y - s.a
    return [((x, base), (x, y)), ((x, base), (x + s.w, base)), ((x + s.w, base - s.b), (x + s.w, base))]


def oracle_skeleton_disjoint(a, pa, b, pb):
    A = sample(oracle_skel_segments(a, pa.x, pa.y))
    B = sample(oracle_skel_segments(b, pb.x, pb.y))
    ends = extreme_points(A) | extreme_points(B)
    return all(p in ends for p in A & B)


skel = st.one_of(st.builds(LSkeleton, grid, grid), st.builds(ZSkeleton, grid, grid, grid))


@settings(max_examples=400)
@given(skel, pos, pos, skel, pos, pos)
def test_skeleton_disjoint_matches_sampling(a, ax, ay, b, bx, by):
    pa, pb = Placement(0, ax, ay), Placement(0, bx, by)
    expected = oracle_skeleton_disjoint(a, pa, b, pb)
    assert skeleton_disjoint(a, pa, b, pb) == expected
    assert skeleton_disjoint(b, pb, a, pa) == expected


def test_skeleton_examples():
    s1 = LSkeleton(F(3, 4), F(3, 4))
    s2 = LSkeleton(F(1, 2), F(1, 2))
    assert skeleton_disjoint(s1, Placement(0, F(1, 4), F(1, 4)), s2, Placement(0, F(1, 2), F(1, 2)))
    # Z' placed left of Z with b < b' and a + b = 1: they intersect
    z = ZSkeleton(F(3, 4), F(1, 2), F(1, 2))
    z2 = ZSkeleton(F(7, 8), F(1, 4), F(3, 4))
    assert not skeleton_disjoint(z, Placement(0, F(1, 8), 1), z2, Placement(0, F(1, 16), 1))
    assert not skeleton_disjoint(z, Placement(0, 0, 1), z, Placement(0, 0, 1))
    # an arm tip touching another skeleton is allowed, a crossing is not
    assert skeleton_disjoint(LSkeleton(F(1, 2), 0), Placement(0, 0, F(1, 4)), LSkeleton(0, 1), Placement(0, F(1, 2), 0))
    assert not skeleton_disjoint(LSkeleton(1, 0), Placement(0, 0, F(1, 4)), LSkeleton(0, 1), Placement(0, F(1, 2), 0))


# ---------------------------------------------------------------------------
# validate_packing


def test_lk_descending_validates_and_swaps_fail():
    assert validate_packing(pack_lk_descending(range(1, 9), 8)) == []
    order = list(range(8, 0, -1))
    for j in range(7):
        swapped = order[:]
        swapped[j], swapped[j + 1] = swapped[j + 1], swapped[j]
        assert validate_packing(lk_stack_packing(swapped, 8))
    assert validate_packing(Packing()) == []


def test_validate_reports_mixed_and_containment():
    pk = Packing()
    pk.add(Rect(F(1, 2), F(1, 2)), Placement(0, F(3, 4), 0))
    (v,) = validate_packing(pk)
    assert v.kind == "containment"
    pk.add(LSkeleton(F(1, 2), F(1, 2)), Placement(0, 0, 0))
    assert validate_packing(pk)[0].kind == "mixed"


@settings(max_examples=60)
@given(st.lists(st.tuples(solid, pos, pos, st.integers(0, 1)), max_size=6))
def test_validate_matches_pairwise_oracle(items):
    pk = Packing()
    for s, x, y, b in items:
        pk.add(s, Placement(b, x, y))
    bad = validate_packing(pk)
    overlaps = {v.items for v in bad if v.kind == "overlap"}
    for i, j in itertools.combinations(range(len(items)), 2):
        (a, ax, ay, ab), (b, bx, by, bb) = items[i], items[j]
        clash = ab == bb and bool(raster(oracle_rects(a, ax, ay)) & raster(oracle_rects(b, bx, by)))
        assert ((i, j) in overlaps) == clash


# ---------------------------------------------------------------------------
# stacks


def test_fits_on_stack_examples():
    stack = [LShape(F(3, 10), F(3, 10), F(2, 5), F(2, 5))]
    assert fits_on_stack(stack, LShape(F(7, 10), 0, F(3, 5), 0)) == (F(3, 10), F(2, 5))
    assert fits_on_stack(stack, LShape(F(71, 100), 0, F(3, 5), 0)) is None
    assert fits_on_stack([], LShape(1, 0, 1, 0)) == (0, 0)


@st.composite
def large_l(draw):
    lx = F(draw(st.integers(32, 64)), 64)
    ly = F(draw(st.integers(32, 64)), 64)
    return LShape(lx, F(draw(st.integers(0, 8)), 64), ly, F(draw(st.integers(0, 8)), 64))


@settings(max_examples=100)
@given(st.lists(large_l(), min_size=1, max_size=8))
def test_accepted_stack_validates(shapes):
    st_ = GravityStack()
    pk = Packing()
    for s in shapes:
        pos = st_.offer(s)
        if pos is not None:
            st_.push(s)
            pk.add(s, Placement(0, *pos))
            assert pos == fits_on_stack(st_.items[:-1], s)
    assert validate_packing(pk) == []
    assert is_stacked(pk.items)


def test_random_valid_large_packings_are_stacked():
    rng = random.Random(5)
    found = 0
    while found < 100:
        pk = Packing()
        for _ in range(rng.randint(1, 4)):
            lx, ly = F(rng.randint(32, 64), 64), F(rng.randint(32, 64), 64)
            s = LShape(lx, F(rng.randint(0, 6), 64), ly, F(rng.randint(0, 6), 64))
            pk.add(s, Placement(0, F(rng.randint(0, int((1 - lx) * 64)), 64), F(rng.randint(0, int((1 - ly) * 64)), 64)))
        if not validate_packing(pk):
            found += 1
            assert is_stacked(pk.items)


def test_is_stacked_small_counterexample_and_single():
    a = LShape(F(1, 4), F(1, 8), F(1, 4), F(1, 8))
    items = [(a, Placement(0, 0, 0)), (a, Placement(0, F(1, 2), 0))]
    assert validate_packing(Packing(items)) == []
    assert not is_stacked(items, strict=False)
    with pytest.raises(ValueError):
        is_stacked(items)
    assert is_stacked([(LShape.symmetric(F(3, 4), F(1, 4)), Placement(0, 0, 0))])


def test_gravity_diagonal_positions():
    one = LShape.symmetric(F(3, 4), F(1, 10))
    assert gravity_diagonal_positions([one]) == [(0, 0)]
    two = LShape.symmetric(F(3, 4), F(1, 5))
    assert gravity_diagonal_positions([one, two]) == [(0, 0), (F(1, 10), F(1, 10))]


# ---------------------------------------------------------------------------
# rotations


def test_split_rotational_examples():
    s = LShape(F(1, 4), F(1, 8), F(1, 4), F(1, 8))
    # four quarter-turned copies around the centre, one per corner
    pk = Packing(
        [
            (s, Placement(0, 0, 0, 0)),
            (s, Placement(0, 1, 0, 1)),
            (s, Placement(0, 1, 1, 2)),
            (s, Placement(0, 0, 1, 3)),
        ]
    )
    assert validate_packing(pk) == []
    out = split_rotational_packing(pk)
    assert out.bin_count == 4 and validate_packing(out) == []
    plain = Packing([(s, Placement(0, 0, 0)), (s, Placement(1, F(1, 2), F(1, 2)))])
    assert split_rotational_packing(plain).items == plain.items
    two = Packing([(s, Placement(b, 0, 0, 0)) for b in (0, 1)] + [(s, Placement(b, 1, 1, 2)) for b in (0, 1)])
    # rotation class 2 maps (1, 1) back to (0, 0): each gets its own bin
    assert split_rotational_packing(two).bin_count == 4


@settings(max_examples=80)
@given(st.lists(st.tuples(grid_lshape(), pos, pos, st.integers(0, 3), st.integers(0, 2)), max_size=6))
def test_split_rotational_property(items):
    pk = Packing([(s, Placement(b, x / 2, y / 2, r)) for s, x, y, r, b in items])
    if validate_packing(pk):
        return
    out = split_rotational_packing(pk)
    assert validate_packing(out) == []
    assert out.bin_count <= 4 * pk.bin_count
    assert all(p.rotation == 0 for _, p in out)

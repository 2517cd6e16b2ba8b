from fractions import Fraction as F
import random

import pytest

from orthopack.adversaries import (
    BinFromStrip,
    FirstFitGravityPacker,
    POLICIES,
    ShelfStripPacker,
    ZAdvState,
    base_separation,
    certificate_eps,
    density_ub_bin_area,
    density_ub_capacity,
    density_ub_instance,
    density_ub_limit,
    horizontal_gaps,
    lk_presenter_match,
    lk_shape,
    ordered_subdivision,
    pack_lk_descending,
    pack_monotone_lregion,
    play_zadversary,
    slot_of_x,
    sorting_from_packing,
    strip_bin_bound,
    thicken,
    thickened_certificate,
    thickness_for,
    zadv_next,
    zskel_certificate,
    zskel_conflict,
)
from orthopack.binsorting import play_sequence, sort_opt
from orthopack.geometry import (
    GravityStack,
    LShape,
    Placement,
    ZSkeleton,
    fits_on_stack,
    shape_rects,
    shape_segments,
    skeleton_disjoint,
    validate_packing,
)


def test_lk_shape_formula():
    assert lk_shape(1, 8) == LShape(F(9, 16), F(1, 16), F(3, 4), F(1, 4))
    assert lk_shape(3, 8) == LShape(F(9, 16), F(1, 16), F(15, 16), F(1, 16))
    assert all(lk_shape(i, 5).wy + lk_shape(i, 5).ly == 1 for i in range(1, 30))


def test_pack_lk_descending():
    pk = pack_lk_descending(range(1, 9), 8)
    assert pk.bin_count == 1 and validate_packing(pk) == []
    assert [p.x for _, p in pk] == [F(j, 16) for j in range(8)]
    assert validate_packing(pack_lk_descending([4], 8)) == []
    with pytest.raises(ValueError):
        pack_lk_descending([1, 1], 8)
    with pytest.raises(ValueError):
        pack_lk_descending(range(1, 10), 8)


def test_slot_mapping_ends():
    k = 8
    assert slot_of_x(0, k) == 0
    assert slot_of_x(F(1, 2) - F(1, 2 * k), k) == k - 1


def test_descending_stream_sorts_into_opt_arrays():
    for n, k in ((8, 8), (5, 8)):
        choose = sorting_from_packing(FirstFitGravityPacker(), k)
        game = play_sequence(range(n, 0, -1), k, choose)
        assert game.check_sorted()
        assert game.array_count == sort_opt(n, k)


def test_presenter_through_packing_n12():
    m = lk_presenter_match(12, FirstFitGravityPacker())
    assert m.bins >= 4 == m.forced
    assert m.certificate.bin_count == 1 and validate_packing(m.certificate) == []
    assert validate_packing(m.packing) == []
    assert m.game.array_count == m.bins


# ---------------------------------------------------------------------------
# strip to bins


class FixedStrip:
    def __init__(self, xs):
        self.xs = iter(xs)

    def place(self, shape):
        return next(self.xs), 1 - shape.ly


def test_bin_from_strip_arithmetic():
    p = BinFromStrip(FixedStrip([F(5, 8)]), 4).place(lk_shape(1, 4))
    assert (p.bin, p.x) == (1, F(1, 8))
    p = BinFromStrip(FixedStrip([F(1, 8)]), 4).place(lk_shape(1, 4))
    assert (p.bin, p.x) == (0, F(1, 8))


def test_shelf_strip_to_bins_valid():
    n = 6
    rng = random.Random(2)
    for _ in range(30):
        idx = rng.sample(range(1, n + 1), rng.randint(1, n))
        strip = ShelfStripPacker(n)
        packer = BinFromStrip(strip, n)
        packer.run([lk_shape(i, n) for i in idx])
        assert validate_packing(packer.packing) == []
        assert packer.bins_used <= strip_bin_bound(strip.width, n)


def test_strip_bin_bound():
    assert strip_bin_bound(F(1, 2), 4) == 1
    assert strip_bin_bound(F(9, 16), 4) == 2  # ceil(4.5) = 5 slots, two bins of four


# ---------------------------------------------------------------------------
# Z-skeleton adversary


def test_zadv_first_steps():
    s = ZAdvState(3)
    z = zadv_next(s)
    assert (z.w, z.b, z.a) == (F(3, 4), F(1, 2), F(1, 2))
    s_left = ZAdvState(3)
    zadv_next(s_left)
    assert zadv_next(s_left, 0).b == F(1, 4)
    s_right = ZAdvState(3)
    zadv_next(s_right)
    assert zadv_next(s_right, F(1, 4)).b == F(3, 4)
    with pytest.raises(ValueError):
        zadv_next(s_right)  # pending response
    with pytest.raises(ValueError):
        zadv_next(s_right, F(1, 2))  # outside the bin


def test_zadv_interval_halves_and_stays_dyadic():
    rng = random.Random(0)
    s = ZAdvState(10)
    z = zadv_next(s)
    while z is not None:
        width = s.b_hi - s.b_lo
        assert 0 <= s.b_lo < s.b_hi <= 1
        assert z.b.denominator <= 2 ** (s.i + 1)
        z = zadv_next(s, POLICIES["random"](z, rng, 10))
        if z is not None:
            assert s.b_hi - s.b_lo == width / 2


def test_zskel_conflict_examples():
    z, z2 = ZSkeleton(F(3, 4), F(1, 2), F(1, 2)), ZSkeleton(F(7, 8), F(1, 4), F(3, 4))
    assert zskel_conflict(z, F(1, 8), z2, F(1, 16))  # x' <= x
    assert zskel_conflict(z, F(1, 8), z2, F(0))
    assert zskel_conflict(ZSkeleton(F(7, 8), F(1, 2), F(1, 2)), F(1, 16), ZSkeleton(F(3, 4), F(1, 4), F(3, 4)), F(1, 8))
    assert not zskel_conflict(z, 0, z2, F(1, 8))  # x' > x and x'+w' > x+w


def test_zskel_conflict_matches_geometry():
    rng = random.Random(11)
    D = 64
    for _ in range(10_000):
        w, w2 = F(rng.randint(D // 2 + 1, D), D), F(rng.randint(D // 2 + 1, D), D)
        b, b2 = rng.sample(range(1, D), 2)  # both arms of positive length
        z, z2 = ZSkeleton(w, 1 - F(b, D), F(b, D)), ZSkeleton(w2, 1 - F(b2, D), F(b2, D))
        x = F(rng.randint(0, int((1 - w) * D)), D)
        x2 = F(rng.randint(0, int((1 - w2) * D)), D)
        geo = not skeleton_disjoint(z, Placement(0, x, 1), z2, Placement(0, x2, 1))
        assert zskel_conflict(z, x, z2, x2) == geo


@pytest.mark.parametrize("policy", sorted(POLICIES))
def test_adversary_forces_n_bins(policy):
    for n in (1, 2, 5, 9):
        m = play_zadversary(n, policy, seed=n)
        assert m.bins == n
        assert validate_packing(m.packing) == []


def test_ordered_subdivision_cases():
    assert ordered_subdivision([ZSkeleton(F(3, 4), F(1, 2), F(1, 2))]).A == ()
    left = play_zadversary(6, "always-left")
    split = ordered_subdivision(left.skeletons)
    assert split.A == tuple(range(5)) and split.B == ()
    s = ZAdvState(4)
    z = zadv_next(s)
    resp = [0, F(1, 8), 0, F(1, 32)]
    for x in resp:
        z = zadv_next(s, x)
    split = ordered_subdivision(s.emitted)
    assert sorted(split.A + split.B) == [0, 1, 2]


def test_pack_monotone_lregion_gaps():
    eps = F(1, 64)
    zs = [ZSkeleton(F(3, 4), F(3, 4), F(1, 4)), ZSkeleton(F(7, 8), F(1, 2), F(1, 2))]
    xs, region = pack_monotone_lregion(zs, eps, "B")
    assert xs == [eps / 2, eps]
    assert region == (eps + F(7, 8), eps, 1, F(1, 2))
    xs1, _ = pack_monotone_lregion(zs[:1], eps, "B")
    assert xs1 == [eps]
    with pytest.raises(ValueError):
        pack_monotone_lregion(zs[::-1], eps, "B")


@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_certificate_one_bin_with_gaps(n):
    for seed in range(5):
        m = play_zadversary(n, "random", seed=seed)
        cert = zskel_certificate(m.skeletons)
        assert cert.bin_count == 1 and validate_packing(cert) == []
        assert 4 * certificate_eps(n) + m.skeletons[-1].w == 1
        assert horizontal_gaps(cert) >= certificate_eps(n) / n
        if n > 1:
            assert base_separation(m.skeletons) >= F(1, 2**n)


def test_thicken():
    z = ZSkeleton(F(3, 4), F(1, 2), F(1, 2))
    flat = thicken(z, 0)
    p = Placement(0, F(1, 8), 1)
    assert sorted(shape_rects(flat, p)) == sorted(shape_segments(z, p))
    assert thickness_for(4) == F(1, 512)
    m = play_zadversary(4, "random", seed=1)
    cert = thickened_certificate(m.skeletons)
    assert cert.bin_count == 1 and validate_packing(cert) == []
    thick = play_zadversary(4, "random", seed=1, thickness=F(1, 512))
    assert thick.bins == 4


def test_density_ub():
    t, w = F(3, 4), F(1, 100)
    assert density_ub_limit(t) == F(3, 8)
    cap = density_ub_capacity(t, w)
    assert cap == 26
    st = GravityStack()
    items = density_ub_instance(t, w, 40)
    for s in items:
        if st.offer(s) is None:
            break
        st.push(s)
    assert len(st.items) == cap
    assert fits_on_stack(st.items, items[0]) is None
    assert density_ub_bin_area(t, w) == F(149, 100) * F(26, 100) == st.area
    with pytest.raises(ValueError):
        density_ub_instance(F(1, 2), w, 1)

"""Lower-bound instance families, reductions and one-bin certificates.

* The family ``L^k``: shapes that fit together only in one order, so a bin
  of them behaves like a sorted array of ``k`` slots.
* Reductions from L-shape bin packing to BinSorting, and from strip packing
  to bin packing.
* The Z-skeleton adversary: every presented Z conflicts with every earlier
  one wherever the algorithm put it, while the whole sequence fits into one
  bin with a margin large enough to thicken the skeletons.
* Symmetric stacks that bound the critical density from above.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .binsorting import SortGame, play_presenter, sort_lower_bound
from .geometry import (
    Box,
    GravityStack,
    LShape,
    Packing,
    Placement,
    ZShape,
    ZSkeleton,
    interior_disjoint,
    shape_rects,
    shape_segments,
    skeleton_disjoint,
    validate_packing,
)
from .packers.base import OnlinePacker, PackerError
from .rational import as_q, pow2

HALF = Fraction(1, 2)
ONE = Fraction(1)
ZERO = Fraction(0)


# ---------------------------------------------------------------------------
# the L^k family


def lk_shape(i: int, k: int) -> LShape:
    if i < 1 or k < 1:
        raise ValueError("need i >= 1 and k >= 1")
    return LShape(HALF + Fraction(1, 2 * k), Fraction(1, 2 * k), 1 - pow2(-i - 1), pow2(-i - 1))


def lk_stack_packing(indices: Sequence[int], k: int, bin: int = 0) -> Packing:
    """Gravity stack of ``L_i`` in the given order (bottom-left first),
    regardless of whether it fits."""
    pk = Packing()
    sx = sy = ZERO
    for i in indices:
        s = lk_shape(i, k)
        pk.add(s, Placement(bin, sx, sy))
        sx += s.wx
        sy += s.wy
    return pk


def pack_lk_descending(indices: Sequence[int], k: int) -> Packing:
    """One-bin packing of distinct ``L_i`` in descending index order; the
    j-th one sits at ``x = (j-1)/(2k)``."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        raise ValueError("indices must be distinct")
    if len(idx) > k:
        raise ValueError(f"at most {k} shapes of L^{k} fit into one bin")
    return lk_stack_packing(sorted(idx, reverse=True), k)


def slot_of_x(x: Fraction, k: int) -> int:
    """0-based slot ``floor(x * 2k)`` of a reference x-coordinate."""
    return floor(as_q(x) * 2 * k)


class FirstFitGravityPacker(OnlinePacker):
    """First bin whose gravity stack accepts the shape on top."""

    name = "first-fit-gravity"

    def __init__(self):
        super().__init__()
        self.stacks: List[GravityStack] = []

    def _place(self, shape: LShape) -> Placement:
        for b, st in enumerate(self.stacks):
            pos = st.offer(shape)
            if pos is not None:
                st.push(shape)
                return Placement(b, *pos)
        st = GravityStack()
        pos = st.push(shape)
        self.stacks.append(st)
        return Placement(len(self.stacks) - 1, *pos)


def sorting_from_packing(packer: OnlinePacker, k: int):
    """BinSorting[k] algorithm driven by an L-shape packer.

    Number ``i`` becomes ``L_i``; the bin is the array.  Larger indices sit
    further left in a bin, so slots are counted from the right.
    """
    bin_to_array: Dict[int, int] = {}

    def choose(game: SortGame, number: int) -> Tuple[int, int]:
        shape = lk_shape(number, k)
        p = packer.place(shape)
        same_bin = Packing([(s, q) for s, q in packer.packing if q.bin == p.bin])
        if validate_packing(same_bin):
            raise PackerError(f"packer placed L_{number} invalidly in bin {p.bin}")
        if p.bin not in bin_to_array:
            bin_to_array[p.bin] = len(bin_to_array)
        return bin_to_array[p.bin], k - 1 - slot_of_x(p.x, k)

    return choose


@dataclass
class LkMatch:
    n: int
    bins: int
    forced: int
    packing: Packing
    certificate: Packing
    game: SortGame


def lk_presenter_match(n: int, packer: OnlinePacker) -> LkMatch:
    """Presenter against ``packer`` on ``L^n``; the certificate packs every
    presented shape in one bin."""
    match = play_presenter(n, n, sorting_from_packing(packer, n))
    cert = pack_lk_descending(match.numbers, n)
    return LkMatch(n, packer.bins_used, sort_lower_bound(n, n), packer.packing, cert, match.game)


# ---------------------------------------------------------------------------
# strip -> bin


class ShelfStripPacker:
    """Strip of height 1 and unbounded width; each ``L^n`` shape goes to the
    first slot ``x = s/(2n)`` where it hangs from the top edge without overlap."""

    def __init__(self, n: int):
        self.n = n
        self.items: List[Tuple[LShape, Placement]] = []

    def place(self, shape: LShape) -> Tuple[Fraction, Fraction]:
        s = 0
        y = 1 - shape.ly
        while True:
            p = Placement(0, Fraction(s, 2 * self.n), y)
            if all(interior_disjoint(shape, p, o, q) for o, q in self.items):
                self.items.append((shape, p))
                return p.x, p.y
            s += 1

    @property
    def width(self) -> Fraction:
        return max((p.x + s.lx for s, p in self.items), default=ZERO)


class BinFromStrip(OnlinePacker):
    """Bin packer obtained by cutting a strip packing into ``n``-slot pieces."""

    name = "bin-from-strip"

    def __init__(self, strip, n: int):
        super().__init__()
        self.strip = strip
        self.n = n

    def _place(self, shape: LShape) -> Placement:
        x, _ = self.strip.place(shape)
        m, r = divmod(floor(x * 2 * self.n), self.n)
        return Placement(m, Fraction(r, 2 * self.n), 1 - shape.ly)


def strip_bin_bound(width: Fraction, n: int) -> int:
    inner = -(-(width * 2 * n).numerator // (width * 2 * n).denominator)
    return -(-inner // n)


# ---------------------------------------------------------------------------
# Z-skeleton adversary


@dataclass
class ZAdvState:
    n: int
    i: int = 0
    b_lo: Fraction = ZERO
    b_hi: Fraction = ONE
    emitted: List[ZSkeleton] = field(default_factory=list)
    responses: List[Fraction] = field(default_factory=list)

    @property
    def done(self) -> bool:
        return self.i >= self.n and len(self.responses) == len(self.emitted)


def zadv_next(state: ZAdvState, response: Optional[Fraction] = None) -> Optional[ZSkeleton]:
    """Record the response to the last emitted Z (if any) and emit the next.

    Returns ``None`` once ``n`` skeletons have been emitted and answered.
    """
    if len(state.responses) < len(state.emitted):
        if response is None:
            raise ValueError("the last skeleton has not been answered")
        x = as_q(response)
        z = state.emitted[-1]
        if not 0 <= x <= 1 - z.w:
            raise ValueError(f"response x={x} puts the skeleton outside the bin")
        state.responses.append(x)
        if x <= (1 - z.w) / 2:
            state.b_hi = z.b
        else:
            state.b_lo = z.b
    elif response is not None:
        raise ValueError("no skeleton awaits a response")
    if state.i >= state.n:
        return None
    state.i += 1
    w = 1 - pow2(-state.i - 1)
    b = (state.b_lo + state.b_hi) / 2
    z = ZSkeleton(w, 1 - b, b)
    state.emitted.append(z)
    return z


def zskel_conflict(z: ZSkeleton, x, z2: ZSkeleton, x2) -> bool:
    """Whether two placed Z-skeletons with arms summing to 1 and widths
    above 1/2 intersect: with ``z`` the one of lower base, iff the other's
    left end is not right of it or its right end is not right of it."""
    if z.b == z2.b:
        raise ValueError("base heights must differ")
    x, x2 = as_q(x), as_q(x2)
    if z.b > z2.b:
        z, x, z2, x2 = z2, x2, z, x
    return x2 <= x or x2 + z2.w <= x + z.w


Policy = Callable[[ZSkeleton, random.Random, int], Fraction]


def _policy_left(z, rng, n):
    return ZERO


def _policy_right(z, rng, n):
    return 1 - z.w


def _policy_random(z, rng, n):
    den = 1 << (n + 4)
    top = (1 - z.w) * den
    return Fraction(rng.randint(0, int(top)), den)


def _policy_middle(z, rng, n):
    return (1 - z.w) / 2


def _policy_just_right(z, rng, n):
    return (1 - z.w) / 2 + pow2(-n - 5)


POLICIES: Dict[str, Policy] = {
    "always-left": _policy_left,
    "always-right": _policy_right,
    "random": _policy_random,
    "middle": _policy_middle,
    "just-right-of-middle": _policy_just_right,
}


@dataclass
class ZMatch:
    n: int
    skeletons: List[ZSkeleton]
    packing: Packing
    responses: List[Fraction]
    bins: int
    thickness: Optional[Fraction] = None

    def trace_rows(self):
        return [(i + 1, z.w, z.a, z.b, x) for i, (z, x) in enumerate(zip(self.skeletons, self.responses))]


def play_zadversary(n: int, policy: str = "random", seed: int = 0, thickness=None, check: bool = True) -> ZMatch:
    """Run the adversary against a first-fit algorithm whose x-coordinate
    comes from ``policy``; a shape opens a new bin when it fits nowhere.

    With ``thickness`` the algorithm receives equal-thickness Z-shapes and
    may also choose its y-coordinate within the slack ``thickness``.
    With ``check`` every new item is verified to conflict with every earlier
    one, by the closed-form test and by the geometric predicate.
    """
    rng = random.Random(seed)
    choose = POLICIES[policy]
    t = None if thickness is None else as_q(thickness)
    state = ZAdvState(n)
    pk = Packing()
    z = zadv_next(state)
    while z is not None:
        x = choose(z, rng, n)
        shape = z if t is None else thicken(z, t)
        y = ONE
        if t is not None and policy == "random":
            y = 1 - Fraction(rng.randint(0, 8), 8) * t
        if check:
            for j, (prev, q) in enumerate(pk.items):
                zp = state.emitted[j]
                closed = zskel_conflict(zp, q.x, z, x)
                here = Placement(q.bin, x, y)
                if t is None:
                    geo = not skeleton_disjoint(prev, q, shape, here)
                else:
                    geo = not interior_disjoint(prev, q, shape, here)
                if closed != geo:
                    raise AssertionError(f"conflict tests disagree for Z_{j + 1} and Z_{state.i}")
                if not closed:
                    raise AssertionError(f"Z_{state.i} fits next to Z_{j + 1}")
        # first bin where the shape fits, else a new one
        bins = pk.bin_count
        target = bins
        for b in range(bins):
            here = Placement(b, x, y)
            members = [(s, q) for s, q in pk.items if q.bin == b]
            test = skeleton_disjoint if t is None else interior_disjoint
            if all(test(s, q, shape, here) for s, q in members):
                target = b
                break
        pk.add(shape, Placement(target, x, y))
        z = zadv_next(state, x)
    return ZMatch(n, list(state.emitted), pk, list(state.responses), pk.bin_count, t)


@dataclass(frozen=True)
class MonotoneSplit:
    A: Tuple[int, ...]  # earlier skeletons with a higher base than the last
    B: Tuple[int, ...]  # earlier skeletons with a lower base than the last


def ordered_subdivision(skeletons: Sequence[ZSkeleton]) -> MonotoneSplit:
    """Split the earlier skeletons around the last one and verify that base
    height rises with width in ``B`` and falls with width in ``A``."""
    if not skeletons:
        return MonotoneSplit((), ())
    last = skeletons[-1]
    A = tuple(j for j, z in enumerate(skeletons[:-1]) if z.b > last.b)
    B = tuple(j for j, z in enumerate(skeletons[:-1]) if z.b < last.b)
    if len(A) + len(B) != len(skeletons) - 1:
        raise AssertionError("two skeletons share a base height")
    for group, rising in ((B, True), (A, False)):
        by_b = sorted(group, key=lambda j: skeletons[j].b)
        ws = [skeletons[j].w for j in by_b]
        ok = all(u < v for u, v in zip(ws, ws[1:])) if rising else all(u > v for u, v in zip(ws, ws[1:]))
        if not ok:
            raise AssertionError("monotone split violated")
    return MonotoneSplit(A, B)


def pack_monotone_lregion(zs: Sequence[ZSkeleton], eps, orientation: str = "B"):
    """Region-local x-coordinates for skeletons sorted by increasing width.

    ``"B"`` (bases rising with width): ``x_j = j*eps/k``, region
    ``(eps + w_k, eps, 1, b_k)``.  ``"A"`` (bases falling with width): the
    half-turned region ``(eps + w_k, eps, 1, a_k)``, with the lower arms
    ``j*eps/k`` left of the region's right edge.  Gaps are at least ``eps/k``.
    """
    eps = as_q(eps)
    k = len(zs)
    if k == 0:
        return [], (eps, eps, ONE, ZERO)
    ws = [z.w for z in zs]
    if any(u >= v for u, v in zip(ws, ws[1:])):
        raise ValueError("widths must increase strictly")
    bs = [z.b for z in zs]
    if orientation == "B":
        if any(u >= v for u, v in zip(bs, bs[1:])):
            raise ValueError("base heights must increase with width")
        xs = [j * eps / k for j in range(1, k + 1)]
        return xs, (eps + ws[-1], eps, ONE, bs[-1])
    if orientation == "A":
        if any(u <= v for u, v in zip(bs, bs[1:])):
            raise ValueError("base heights must decrease with width")
        right = eps + ws[-1]
        xs = [right - j * eps / k - z.w for j, z in enumerate(zs, 1)]
        return xs, (eps + ws[-1], eps, ONE, zs[-1].a)
    raise ValueError("orientation must be 'A' or 'B'")


def certificate_eps(n: int) -> Fraction:
    """Gap budget so that ``4*eps + w_n = 1``."""
    return pow2(-n - 3)


def zskel_certificate(skeletons: Sequence[ZSkeleton]) -> Packing:
    """One-bin packing of an adversary sequence with horizontal gaps >= eps/n."""
    n = len(skeletons)
    pk = Packing()
    if n == 0:
        return pk
    eps = certificate_eps(n)
    split = ordered_subdivision(skeletons)
    zn = skeletons[-1]
    if 4 * eps + zn.w != 1:
        raise ValueError("not an adversary sequence: width identity fails")
    positions: Dict[int, Fraction] = {n - 1: 2 * eps}
    for orient, group in (("B", split.B), ("A", split.A)):
        order = sorted(group, key=lambda j: skeletons[j].w)
        xs, (region_w, _, _, _) = pack_monotone_lregion([skeletons[j] for j in order], eps, orient)
        # B region starts eps/2 from the left edge, A region ends eps/2 from the right
        offset = eps / 2 if orient == "B" else ONE - eps / 2 - region_w
        for j, x in zip(order, xs):
            positions[j] = offset + x
    for j, z in enumerate(skeletons):
        pk.add(z, Placement(0, positions[j], ONE))
    return pk


def thicken(z: ZSkeleton, t) -> ZShape:
    return ZShape.equal_thickness(z.w, z.a, z.b, t)


def thickness_for(n: int) -> Fraction:
    return pow2(-n - 3) / n


def thickened_certificate(skeletons: Sequence[ZSkeleton], t=None) -> Packing:
    t = thickness_for(len(skeletons)) if t is None else as_q(t)
    pk = Packing()
    for z, p in zskel_certificate(skeletons):
        pk.add(thicken(z, t), p)
    return pk


def horizontal_gaps(packing: Packing, width=ONE) -> Fraction:
    """Smallest horizontal distance between two skeletons, or between a
    skeleton and the left/right bin edge, along any horizontal line."""
    segs = []
    for idx, (s, p) in enumerate(packing):
        for seg in shape_segments(s, p):
            segs.append((idx, seg))
    best = None

    def upd(v):
        nonlocal best
        best = v if best is None or v < best else best

    for _, s in segs:
        upd(s.x0)
        upd(width - s.x1)
    for i in range(len(segs)):
        ia, a = segs[i]
        for j in range(i + 1, len(segs)):
            ib, b = segs[j]
            if ia == ib or a.y0 > b.y1 or b.y0 > a.y1:
                continue
            upd(max(b.x0 - a.x1, a.x0 - b.x1, ZERO))
    return best if best is not None else width


def base_separation(skeletons: Sequence[ZSkeleton]) -> Optional[Fraction]:
    bs = sorted(z.b for z in skeletons)
    return min((v - u for u, v in zip(bs, bs[1:])), default=None)


# ---------------------------------------------------------------------------
# density upper bound


def density_ub_instance(t, w, count: int) -> List[LShape]:
    t, w = as_q(t), as_q(w)
    if not HALF < t < 1 or not 0 < w <= t:
        raise ValueError("need 1/2 < t < 1 and 0 < w <= t")
    return [LShape(t, w, t, w)] * count


def density_ub_capacity(t, w) -> int:
    t, w = as_q(t), as_q(w)
    return floor((1 - t) / w) + 1


def density_ub_bin_area(t, w) -> Fraction:
    t, w = as_q(t), as_q(w)
    return density_ub_capacity(t, w) * (2 * t - w) * w


def density_ub_limit(t) -> Fraction:
    t = as_q(t)
    return 2 * t * (1 - t)

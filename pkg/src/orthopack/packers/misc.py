"""Trivial baseline, symmetric combiner, L-skeleton packer, critical-density
packer and bounding-box perimeter packer."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..geometry import Box, GravityStack, LShape, LSkeleton, Placement, bounding_box, shape_rects
from ..rational import as_q, floor_log2, pow2
from .base import BinCounter, OnlinePacker, PackerError
from .small import DensePacker, SmallLPacker, category_ab, dyadic_class
from .symmetric import LaSyLPacker

HALF = Fraction(1, 2)
ZERO = Fraction(0)


class TrivialPacker(OnlinePacker):
    """Every item alone in a fresh bin, bounding box in the bin corner."""

    name = "trivial"

    def _place(self, item) -> Placement:
        ext = item.extent
        return Placement(len(self.packing.items), -ext.x0, -ext.y0)


class SymmetricPacker(OnlinePacker):
    """Small (arm <= 1/2) shapes to SmallL, the rest to LaSyL, in separate bins."""

    name = "symmetric"

    def __init__(self, audit: bool = True):
        super().__init__()
        self.counter = BinCounter()
        self.small = SmallLPacker(self.counter, audit=audit)
        self.large = LaSyLPacker(self.counter, audit=audit)

    def _place(self, shape: LShape) -> Placement:
        if not shape.is_symmetric:
            raise ValueError("symmetric packer got an asymmetric L-shape")
        return (self.small if shape.lx <= HALF else self.large).place(shape)

    @property
    def bins_used(self) -> int:
        return self.counter.next


# ---------------------------------------------------------------------------
# L-skeletons


class NextFit:
    """One-dimensional NextFit with unit capacity."""

    def __init__(self, counter: BinCounter):
        self.counter = counter
        self.bin: Optional[int] = None
        self.fill = ZERO
        self.closed_fills: List[Fraction] = []
        self.bins = 0

    def put(self, size: Fraction) -> Tuple[int, Fraction]:
        if self.bin is None or self.fill + size > 1:
            if self.bin is not None:
                self.closed_fills.append(self.fill)
                if len(self.closed_fills) >= 2 and not sum(self.closed_fills[-2:]) > 1:
                    raise PackerError("two consecutive NextFit bins hold at most 1")
            self.bin = self.counter.fresh()
            self.fill = ZERO
            self.bins += 1
        offset = self.fill
        self.fill += size
        return self.bin, offset


class LSkeletonPacker(OnlinePacker):
    """Both arms shorter than 1: one shared bin, reference on the diagonal.
    Horizontal arm of length 1: NextFit on the vertical arm, and vice versa."""

    name = "lskel"

    def __init__(self):
        super().__init__()
        self.counter = BinCounter()
        self.diag_bin: Optional[int] = None
        self.occupied: List[Fraction] = []
        self.horizontal = NextFit(self.counter)  # lx == 1
        self.vertical = NextFit(self.counter)  # ly == 1, lx < 1

    def _place(self, skel: LSkeleton) -> Placement:
        if skel.lx == 1:
            if skel.ly == 0:
                raise ValueError("an arm of length 1 needs a positive second arm")
            b, y = self.horizontal.put(skel.ly)
            return Placement(b, ZERO, y)
        if skel.ly == 1:
            if skel.lx == 0:
                raise ValueError("an arm of length 1 needs a positive second arm")
            b, x = self.vertical.put(skel.lx)
            return Placement(b, x, ZERO)
        if self.diag_bin is None:
            self.diag_bin = self.counter.fresh()
        d = 1 - max(skel.lx, skel.ly)
        i = bisect.bisect_left(self.occupied, d)
        if i < len(self.occupied) and self.occupied[i] == d:
            below = self.occupied[i - 1] if i > 0 else ZERO
            d = (d + below) / 2
            i = bisect.bisect_left(self.occupied, d)
        self.occupied.insert(i, d)
        return Placement(self.diag_bin, d, d)

    @property
    def bins_used(self) -> int:
        return self.counter.next


# ---------------------------------------------------------------------------
# critical density


class BudgetExceeded(ValueError):
    """The stream's total area went over the guaranteed budget."""


@dataclass(frozen=True)
class DensityLayout:
    t: Fraction

    @property
    def budget(self) -> Fraction:
        return (1 - self.t) ** 3 / 125

    @property
    def a(self) -> Fraction:
        return (1 - self.t) / 10

    @property
    def h(self) -> Fraction:
        return 2 * self.a

    def containers(self) -> Dict[str, Box]:
        t, h, a = self.t, self.h, self.a
        s = t + h
        return {
            "ll": Box(ZERO, ZERO, s, s),
            "ls": Box(ZERO, s, s, s + 4 * h),
            "sl": Box(s, ZERO, s + 4 * h, s),
            "ss": Box(s, s, s + 8 * a, s + 8 * a),
        }


class CriticalDensityPacker(OnlinePacker):
    """Packs any stream with arms <= t < 1 and total area <= (1-t)^3/125
    into a single unit bin."""

    name = "critical-density"

    def __init__(self, t, audit: bool = True):
        super().__init__()
        t = as_q(t)
        if not 0 <= t < 1:
            raise ValueError("arm bound t must lie in [0, 1)")
        self.layout = DensityLayout(t)
        self.area = ZERO
        L = self.layout
        s = t + L.h
        self.ll = GravityStack(s, s)
        cls_density = L.a / (2 * s)
        self.ls: Dict[int, DensePacker] = {}
        self.ls_origin: Dict[Tuple[int, int], Fraction] = {}
        self.ls_next = ZERO
        self.sl: Dict[int, DensePacker] = {}
        self.sl_origin: Dict[Tuple[int, int], Fraction] = {}
        self.sl_next = ZERO
        self._cls_density = cls_density if audit else None
        self.ss = SmallLPacker(audit=audit)

    def _class_packer(self, pool, i):
        L = self.layout
        if i not in pool:
            long_side, short_side = L.t + L.h, L.h / pow2(i - 1)
            if pool is self.ls:
                pool[i] = DensePacker(long_side, short_side, first_fit=True, min_density=self._cls_density)
            else:
                pool[i] = DensePacker(short_side, long_side, first_fit=True, min_density=self._cls_density)
        return pool[i]

    def _place(self, shape: LShape) -> Placement:
        L = self.layout
        if shape.lx == 0 or shape.ly == 0:
            raise ValueError("arms must have positive length")
        if shape.lx > L.t or shape.ly > L.t:
            raise ValueError(f"arm longer than the bound t={L.t}")
        if self.area + shape.area > L.budget:
            raise BudgetExceeded(f"area {self.area + shape.area} over budget {L.budget}")
        self.area += shape.area
        a, s = L.a, L.t + L.h
        big_x, big_y = shape.lx > a, shape.ly > a
        if big_x and big_y:
            pos = self.ll.offer(shape)
            if pos is None:
                raise PackerError("large-large stack overflow under budget")
            self.ll.push(shape)
            return Placement(0, pos[0], pos[1])
        if big_x:
            i = dyadic_class(shape.ly / L.h) + 1
            packer = self._class_packer(self.ls, i)
            idx, (ox, oy), opened = packer.pack(shape)
            if opened:
                self.ls_origin[(i, idx)] = self.ls_next
                self.ls_next += packer.height
                if self.ls_next > 4 * L.h:
                    raise PackerError("wide-short container overflow under budget")
            return Placement(0, ox, s + self.ls_origin[(i, idx)] + oy)
        if big_y:
            i = dyadic_class(shape.lx / L.h) + 1
            packer = self._class_packer(self.sl, i)
            idx, (ox, oy), opened = packer.pack(shape)
            if opened:
                self.sl_origin[(i, idx)] = self.sl_next
                self.sl_next += packer.width
                if self.sl_next > 4 * L.h:
                    raise PackerError("narrow-tall container overflow under budget")
            return Placement(0, s + self.sl_origin[(i, idx)] + ox, oy)
        scale = 2 * a
        scaled = LShape(shape.lx / scale, shape.wx / scale, shape.ly / scale, shape.wy / scale)
        p = self.ss.place(scaled)
        if p.bin >= 16:
            raise PackerError("small-small pool needs more than 16 sub-squares")
        cx = s + scale * (p.bin % 4)
        cy = s + scale * (p.bin // 4)
        return Placement(0, cx + scale * p.x, cy + scale * p.y)


# ---------------------------------------------------------------------------
# perimeter


def pow2_at_least(v: Fraction) -> Fraction:
    e = floor_log2(v)
    return pow2(e) if pow2(e) == v else pow2(e + 1)


def pow2_at_least_sqrt(v: Fraction) -> Fraction:
    """Smallest power of two ``p`` with ``p*p >= v``."""
    e = (floor_log2(v) + 1) // 2
    while pow2(2 * (e - 1)) >= v:
        e -= 1
    while pow2(2 * e) < v:
        e += 1
    return pow2(e)


@dataclass
class Shelf:
    height: Fraction
    top: Fraction
    fill: Fraction = ZERO


class PerimeterPacker(OnlinePacker):
    """Packs L-shapes in the plane, keeping the bounding box small.

    Shapes fill power-of-two rectangles per size class.  The first rectangle
    of each class goes to the dyadic tiling position ``(2^-a, 2^-b)``; later
    ones go into shelves below the x-axis, one height per shelf, whose width
    limit is a power of two tracking the square root of the shelved area.
    """

    name = "perimeter"

    def __init__(self):
        super().__init__()
        self.active: Dict[Tuple[int, int], Tuple[GravityStack, Fraction, Fraction]] = {}
        self.shelves: List[Shelf] = []
        self.bottom = ZERO
        self.brick_area = ZERO
        self.max_brick_width = ZERO
        self.bbox: Optional[Box] = None
        self.item_area = ZERO
        self.max_lx = ZERO
        self.max_ly = ZERO
        self.closed_densities: List[Fraction] = []

    def _shelf_position(self, w: Fraction, h: Fraction) -> Tuple[Fraction, Fraction]:
        self.brick_area += w * h
        self.max_brick_width = max(self.max_brick_width, w)
        limit = max(pow2_at_least(self.max_brick_width), pow2_at_least_sqrt(self.brick_area))
        for sh in self.shelves:
            if sh.height == h and sh.fill + w <= limit:
                x = sh.fill
                sh.fill += w
                return x, sh.top - h
        sh = Shelf(h, self.bottom, w)
        self.shelves.append(sh)
        self.bottom -= h
        return ZERO, sh.top - h

    def _place(self, shape: LShape) -> Placement:
        a, b = category_ab(shape, allow_large=True)
        w, h = pow2(-a), pow2(-b)
        entry = self.active.get((a, b))
        pos = entry[0].offer(shape) if entry is not None else None
        if pos is None:
            if entry is None:
                rx, ry = w, h
            else:
                st = entry[0]
                self.closed_densities.append(st.area / (st.width * st.height))
                rx, ry = self._shelf_position(w, h)
            entry = (GravityStack(w, h), rx, ry)
            self.active[(a, b)] = entry
            pos = entry[0].offer(shape)
        entry[0].push(shape)
        p = Placement(0, entry[1] + pos[0], entry[2] + pos[1])
        box = bounding_box(shape_rects(shape, p))
        self.bbox = box if self.bbox is None else bounding_box([self.bbox, box])
        self.item_area += shape.area
        self.max_lx = max(self.max_lx, shape.lx)
        self.max_ly = max(self.max_ly, shape.ly)
        return p

    @property
    def perimeter(self) -> Fraction:
        if self.bbox is None:
            return ZERO
        return 2 * ((self.bbox.x1 - self.bbox.x0) + (self.bbox.y1 - self.bbox.y0))

    def within_constant(self, c) -> bool:
        """perimeter <= c * max(2 (W* + H*), 4 sqrt(total area)), exactly."""
        p = self.perimeter
        if p <= c * 2 * (self.max_lx + self.max_ly):
            return True
        return p * p <= (4 * c) ** 2 * self.item_area

"""Online packing of large symmetric L-shapes.

A large symmetric L-shape with arm length ``l`` and width ``w`` always sits
on the diagonal of its bin, so only its x-coordinate matters: the vertical
arm occupies the x-range ``[x, x + w]`` with ``x <= 1 - l``.  Shapes are
split by the dyadic class of ``1 - l + w``.  Short ones are first-fit into
a reserved dyadic sub-interval; long ones go right-most and get their bin
from an online interval colouring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..coloring import IntervalColorer
from ..geometry import LShape, Placement
from ..rational import floor_log2, pow2
from .base import BinCounter, OnlinePacker, PackerError

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class XRange:
    xhat: Fraction
    w: Fraction
    k: Optional[int]  # None for the degenerate l = 1, w = 0 item
    short: bool


def categorize(shape: LShape) -> XRange:
    if not shape.is_symmetric:
        raise ValueError("expected a symmetric L-shape")
    if shape.lx < HALF:
        raise ValueError("expected a large L-shape (arm length >= 1/2)")
    xhat = 1 - shape.lx
    w = shape.wx
    end = xhat + w
    if end == 0:
        return XRange(xhat, w, None, False)
    k = -floor_log2(end)
    return XRange(xhat, w, k, w < pow2(-k - 2))


def ikpp_occupancy(xhat: Fraction, w: Fraction) -> List[Tuple[int, Fraction, Fraction]]:
    """For each k >= 1 with the open range meeting I_k, return
    (k, |I_k++ cap [xhat, xhat + w]|, |I_k++|)."""
    out = []
    if w == 0:
        return out
    lo, hi = xhat, xhat + w
    k = 1
    while True:
        ik_lo, ik_hi = pow2(-k), pow2(-k + 1)
        if ik_hi <= lo:
            break
        top = ik_hi + pow2(-k - 2)
        if lo < ik_hi and hi > ik_lo:
            meet = max(Fraction(0), min(hi, top) - max(lo, Fraction(0)))
            out.append((k, meet, top))
        if lo == 0 and top <= hi:
            break  # every further I_k++ lies inside the range
        k += 1
    return out


class LaSyLPacker(OnlinePacker):
    """Short/long split with FirstFit and interval colouring."""

    name = "lasyl"

    def __init__(self, counter: Optional[BinCounter] = None, audit: bool = True):
        super().__init__()
        self.counter = counter or BinCounter()
        self.audit = audit
        # short pool: bin -> {sub-interval index k+1: fill level}
        self.short_bins: List[Tuple[int, Dict[int, Fraction]]] = []
        self.colorer = IntervalColorer()
        self.color_bin: Dict[int, int] = {}
        self.bin_ranges: Dict[int, List[Tuple[Fraction, Fraction]]] = {}
        self.short_count = 0
        self.long_count = 0

    @property
    def bins_used(self) -> int:
        return self.short_bin_count + self.long_bin_count

    @property
    def short_bin_count(self) -> int:
        return len(self.short_bins)

    @property
    def long_bin_count(self) -> int:
        return len(self.color_bin)

    def _place(self, shape: LShape) -> Placement:
        xr = categorize(shape)
        if xr.short:
            x, b = self._pack_short(xr)
            self.short_count += 1
        else:
            x, b = self._pack_long(xr)
            self.long_count += 1
        self.bin_ranges.setdefault(b, []).append((x, x + xr.w))
        return Placement(b, x, x)

    def _pack_short(self, xr: XRange) -> Tuple[Fraction, int]:
        sub = xr.k + 1
        size = pow2(-sub)
        for b, levels in self.short_bins:
            fill = levels.get(sub, Fraction(0))
            if fill + xr.w <= size:
                levels[sub] = fill + xr.w
                return size + fill, b
        b = self.counter.fresh()
        self.short_bins.append((b, {sub: xr.w}))
        return size, b

    def _pack_long(self, xr: XRange) -> Tuple[Fraction, int]:
        x = xr.xhat
        if self.audit:
            for k, meet, full in ikpp_occupancy(x, xr.w):
                if 9 * meet < full:
                    raise PackerError(f"x-range [{x}, {x + xr.w}] covers too little of I_{k}++")
        col = self.colorer.color(x, x + xr.w)
        if col not in self.color_bin:
            self.color_bin[col] = self.counter.fresh()
        return x, self.color_bin[col]

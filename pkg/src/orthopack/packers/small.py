"""Online packing of small L-shapes.

Shapes are grouped by the dyadic classes of their two arm lengths.  Each
class fills power-of-two rectangles with gravity stacks; the rectangles
themselves are packed into unit bins by height-level first-fit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..geometry import Box, GravityStack, LShape, Placement, Rect
from ..rational import floor_log2, pow2
from .base import BinCounter, OnlinePacker, PackerError

ONE = Fraction(1)
HALF = Fraction(1, 2)


def dyadic_class(v: Fraction) -> int:
    """The integer ``a`` with ``2**(-a-2) < v <= 2**(-a-1)``."""
    if v <= 0:
        raise ValueError("arm length must be positive")
    e = floor_log2(v)
    return -e - 1 if v == pow2(e) else -e - 2


def category_ab(shape: LShape, allow_large: bool = False) -> Tuple[int, int]:
    if not allow_large and not shape.is_small:
        raise ValueError("expected a small L-shape")
    if shape.lx == 0 or shape.ly == 0:
        raise ValueError("zero arm length has no category")
    return dyadic_class(shape.lx), dyadic_class(shape.ly)


def is_power_of_two(v: Fraction) -> bool:
    if v <= 0:
        return False
    return v == pow2(floor_log2(v))


# ---------------------------------------------------------------------------
# DensePacker


@dataclass
class DenseRect:
    stack: GravityStack
    closed: bool = False

    @property
    def density(self) -> Fraction:
        return self.stack.area / (self.stack.width * self.stack.height)


class DensePacker:
    """Gravity stacks inside ``width x height`` rectangles.

    With ``first_fit`` every rectangle stays available; otherwise only the
    newest one is, and it is closed for good once a shape does not fit.
    ``min_density`` is asserted for every rectangle that is passed over when
    a new one is opened.
    """

    def __init__(self, width, height, first_fit: bool = False, min_density: Optional[Fraction] = None):
        self.width = Fraction(width)
        self.height = Fraction(height)
        self.first_fit = first_fit
        self.min_density = min_density
        self.rects: List[DenseRect] = []

    def pack(self, shape: LShape) -> Tuple[int, Tuple[Fraction, Fraction], bool]:
        """Returns (rectangle index, offset inside it, whether it was just opened)."""
        candidates = range(len(self.rects)) if self.first_fit else range(max(0, len(self.rects) - 1), len(self.rects))
        for idx in candidates:
            r = self.rects[idx]
            if r.closed:
                continue
            pos = r.stack.offer(shape)
            if pos is not None:
                r.stack.push(shape)
                return idx, pos, False
        for r in self.rects:
            if not r.closed and not self.first_fit:
                r.closed = True
            if self.min_density is not None and not r.density > self.min_density:
                raise PackerError(f"rectangle passed over at density {r.density}")
        fresh = DenseRect(GravityStack(self.width, self.height))
        if fresh.stack.offer(shape) is None:
            raise ValueError("shape does not fit into an empty rectangle")
        pos = fresh.stack.push(shape)
        self.rects.append(fresh)
        return len(self.rects) - 1, pos, True


# ---------------------------------------------------------------------------
# NiceRectanglePacker


@dataclass
class Strip:
    height: Fraction
    bin: int
    y: Fraction
    fill: Fraction = Fraction(0)


class NiceRectanglePacker:
    """First-fit of power-of-two rectangles into unit-width strips of equal
    height, and first-fit of strips into unit bins."""

    def __init__(self, audit: bool = True):
        self.strips: Dict[Fraction, List[Strip]] = {}
        self.bin_fill: List[Fraction] = []
        self.rect_area = Fraction(0)
        self.audit = audit

    @property
    def bins_used(self) -> int:
        return len(self.bin_fill)

    @property
    def free_area(self) -> Fraction:
        return len(self.bin_fill) - self.rect_area

    def pack(self, width, height) -> Tuple[int, Fraction, Fraction]:
        """Returns (bin, x, y) of the rectangle's lower-left corner."""
        width, height = Fraction(width), Fraction(height)
        if not (is_power_of_two(width) and is_power_of_two(height)) or width > 1 or height > 1:
            raise ValueError(f"{width} x {height} is not a power-of-two rectangle within the unit square")
        row = self.strips.setdefault(height, [])
        target = None
        for s in row:
            if s.fill + width <= 1:
                target = s
                break
        if target is None:
            b = next((i for i, f in enumerate(self.bin_fill) if f + height <= 1), None)
            if b is None:
                b = len(self.bin_fill)
                self.bin_fill.append(Fraction(0))
            target = Strip(height, b, self.bin_fill[b])
            self.bin_fill[b] += height
            row.append(target)
        x = target.fill
        target.fill += width
        self.rect_area += width * height
        if self.audit and self.free_area > 3:
            raise PackerError(f"free area {self.free_area} exceeds 3")
        return target.bin, x, target.y


def rtiling_area(levels: Optional[int] = None) -> Fraction:
    """Total area of the power-of-two rectangles ``2^-i x 2^-j``.

    ``None`` gives the whole family (exactly 4); an integer ``N`` truncates
    to ``0 <= i, j <= N``.
    """
    if levels is None:
        return Fraction(4)
    side = sum((pow2(-i) for i in range(levels + 1)), Fraction(0))
    return side * side


def rtiling_positions(levels: int, start: int = 0) -> List[Tuple[Rect, Placement]]:
    """Each ``a x b`` rectangle of the family with its lower-left corner at ``(a, b)``."""
    out = []
    for i in range(start, levels + 1):
        for j in range(start, levels + 1):
            a, b = pow2(-i), pow2(-j)
            out.append((Rect(a, b), Placement(0, a, b)))
    return out


# ---------------------------------------------------------------------------
# SmallL


@dataclass
class ActiveRect:
    stack: GravityStack
    bin: int
    x: Fraction
    y: Fraction


class SmallLPacker(OnlinePacker):
    name = "smalll"

    def __init__(self, counter: Optional[BinCounter] = None, audit: bool = True):
        super().__init__()
        self.counter = counter or BinCounter()
        self.audit = audit
        self.rects = NiceRectanglePacker(audit=audit)
        self.bin_map: Dict[int, int] = {}
        self.active: Dict[Tuple[int, int], ActiveRect] = {}
        self.closed_densities: List[Fraction] = []
        self.item_area = Fraction(0)

    @property
    def bins_used(self) -> int:
        return len(self.bin_map)

    def _place(self, shape: LShape) -> Placement:
        a, b = category_ab(shape)
        act = self.active.get((a, b))
        pos = act.stack.offer(shape) if act is not None else None
        if pos is None:
            if act is not None:
                d = act.stack.area / (act.stack.width * act.stack.height)
                if self.audit and not d > Fraction(1, 8):
                    raise PackerError(f"closed rectangle density {d} <= 1/8")
                self.closed_densities.append(d)
            w, h = pow2(-a), pow2(-b)
            nb, x, y = self.rects.pack(w, h)
            if nb not in self.bin_map:
                self.bin_map[nb] = self.counter.fresh()
            act = ActiveRect(GravityStack(w, h), self.bin_map[nb], x, y)
            self.active[(a, b)] = act
            pos = act.stack.offer(shape)
        act.stack.push(shape)
        self.item_area += shape.area
        return Placement(act.bin, act.x + pos[0], act.y + pos[1])

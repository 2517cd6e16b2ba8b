"""Exact geometric kernel: shape types, placements, validity predicates.

Solids (L-shapes, Z-shapes, rectangles) are closed sets and may touch; two
solids conflict when their interiors meet.  Skeletons are finite unions of
axis-parallel segments; two skeletons may only meet in points that are an
endpoint (unique topmost/bottommost/leftmost/rightmost point) of one of them.

Reference points:

* ``LShape`` / ``LSkeleton`` / ``Rect``: lower-left corner.
* ``ZShape`` / ``ZSkeleton``: top of the upper arm (its upper-left corner).
  With ``a + b = 1`` a Z-skeleton only fits in a unit bin at ``y = 1``.

Rotations are quarter turns counter-clockwise about the reference point and
live on the :class:`Placement`, not on the shape.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from .rational import as_q

__all__ = [
    "LShape",
    "LSkeleton",
    "ZShape",
    "ZSkeleton",
    "Rect",
    "Placement",
    "Packing",
    "Violation",
    "Box",
    "GravityStack",
    "shape_rects",
    "shape_segments",
    "bounding_box",
    "interior_disjoint",
    "skeleton_disjoint",
    "validate_packing",
    "fits_on_stack",
    "is_stacked",
    "gravity_diagonal_positions",
    "split_rotational_packing",
    "rotate_point",
]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class Box(NamedTuple):
    """Closed axis-parallel box ``[x0, x1] x [y0, y1]``; also used for segments."""

    x0: Fraction
    y0: Fraction
    x1: Fraction
    y1: Fraction

    def shifted(self, dx, dy) -> "Box":
        return Box(self.x0 + dx, self.y0 + dy, self.x1 + dx, self.y1 + dy)


def _check_unit(name, value) -> Fraction:
    v = as_q(value)
    if not 0 <= v <= 1:
        raise ValueError(f"{name}={v} outside [0, 1]")
    return v


# ---------------------------------------------------------------------------
# shapes


@dataclass(frozen=True)
class LShape:
    """Union of ``[0,lx] x [0,wy]`` and ``[0,wx] x [0,ly]``."""

    lx: Fraction
    wx: Fraction
    ly: Fraction
    wy: Fraction

    def __post_init__(self):
        for name in ("lx", "wx", "ly", "wy"):
            object.__setattr__(self, name, _check_unit(name, getattr(self, name)))
        if self.wx > self.lx or self.wy > self.ly:
            raise ValueError(f"arm widths exceed arm lengths: {self}")

    @classmethod
    def symmetric(cls, length, width) -> "LShape":
        return cls(length, width, length, width)

    @property
    def is_small(self) -> bool:
        return self.lx <= HALF and self.ly <= HALF

    @property
    def is_large(self) -> bool:
        return self.lx >= HALF and self.ly >= HALF

    @property
    def is_symmetric(self) -> bool:
        return self.lx == self.ly and self.wx == self.wy

    @property
    def area(self) -> Fraction:
        return self.lx * self.wy + self.wx * self.ly - self.wx * self.wy

    def rects(self) -> List[Box]:
        return [Box(ZERO, ZERO, self.lx, self.wy), Box(ZERO, ZERO, self.wx, self.ly)]

    @property
    def extent(self) -> Box:
        return Box(ZERO, ZERO, self.lx, self.ly)


@dataclass(frozen=True)
class ZShape:
    """Base ``w x t`` with an arm of width ``t_a`` rising ``a`` from its left end
    and an arm of width ``t_b`` hanging ``b`` from its right end."""

    w: Fraction
    a: Fraction
    b: Fraction
    t_a: Fraction
    t_b: Fraction
    t: Fraction

    def __post_init__(self):
        for name in ("w", "a", "b", "t_a", "t_b", "t"):
            object.__setattr__(self, name, _check_unit(name, getattr(self, name)))
        if self.t_a > self.w or self.t_b > self.w:
            raise ValueError(f"arm thickness exceeds base width: {self}")

    @classmethod
    def equal_thickness(cls, w, a, b, t) -> "ZShape":
        return cls(w, a, b, t, t, t)

    def rects(self) -> List[Box]:
        y0 = -self.a  # base bottom, relative to the reference point
        return [
            Box(ZERO, y0, self.w, y0 + self.t),
            Box(ZERO, y0, self.t_a, ZERO),
            Box(self.w - self.t_b, y0 + self.t - self.b, self.w, y0 + self.t),
        ]

    @property
    def area(self) -> Fraction:
        total = ZERO
        rs = self.rects()
        # inclusion-exclusion over three boxes
        for i in range(3):
            total += _box_area(rs[i])
        for i in range(3):
            for j in range(i + 1, 3):
                total -= _box_area(_box_meet(rs[i], rs[j]))
        total += _box_area(_box_meet(_box_meet(rs[0], rs[1]), rs[2]))
        return total

    @property
    def extent(self) -> Box:
        return bounding_box(self.rects())


@dataclass(frozen=True)
class Rect:
    """Axis-parallel ``width x height`` rectangle."""

    width: Fraction
    height: Fraction

    def __post_init__(self):
        for name in ("width", "height"):
            v = as_q(getattr(self, name))
            if v < 0:
                raise ValueError(f"{name} must be nonnegative")
            object.__setattr__(self, name, v)

    def rects(self) -> List[Box]:
        return [Box(ZERO, ZERO, self.width, self.height)]

    @property
    def area(self) -> Fraction:
        return self.width * self.height

    @property
    def extent(self) -> Box:
        return Box(ZERO, ZERO, self.width, self.height)


@dataclass(frozen=True)
class LSkeleton:
    """Two segments from the reference corner: right by ``lx`` and up by ``ly``."""

    lx: Fraction
    ly: Fraction

    def __post_init__(self):
        for name in ("lx", "ly"):
            object.__setattr__(self, name, _check_unit(name, getattr(self, name)))

    def segments(self) -> List[Box]:
        return [Box(ZERO, ZERO, self.lx, ZERO), Box(ZERO, ZERO, ZERO, self.ly)]

    @property
    def extent(self) -> Box:
        return Box(ZERO, ZERO, self.lx, self.ly)


@dataclass(frozen=True)
class ZSkeleton:
    """Upper arm of length ``a`` at the left end of a horizontal base of length
    ``w``, lower arm of length ``b`` at its right end."""

    w: Fraction
    a: Fraction
    b: Fraction

    def __post_init__(self):
        for name in ("w", "a", "b"):
            v = as_q(getattr(self, name))
            if v < 0:
                raise ValueError(f"{name} must be nonnegative")
            object.__setattr__(self, name, v)

    def segments(self) -> List[Box]:
        y0 = -self.a
        return [
            Box(ZERO, y0, ZERO, ZERO),
            Box(ZERO, y0, self.w, y0),
            Box(self.w, y0 - self.b, self.w, y0),
        ]

    @property
    def extent(self) -> Box:
        return Box(ZERO, -self.a - self.b, self.w, ZERO)


Solid = Union[LShape, ZShape, Rect]
Skeleton = Union[LSkeleton, ZSkeleton]
Shape = Union[LShape, ZShape, Rect, LSkeleton, ZSkeleton]

SOLID_TYPES = (LShape, ZShape, Rect)
SKELETON_TYPES = (LSkeleton, ZSkeleton)


def is_solid(shape) -> bool:
    return isinstance(shape, SOLID_TYPES)


def is_skeleton(shape) -> bool:
    return isinstance(shape, SKELETON_TYPES)


# ---------------------------------------------------------------------------
# placements


@dataclass(frozen=True)
class Placement:
    bin: int
    x: Fraction
    y: Fraction
    rotation: int = 0  # quarter turns counter-clockwise

    def __post_init__(self):
        if self.bin < 0:
            raise ValueError("bin index must be nonnegative")
        object.__setattr__(self, "x", as_q(self.x))
        object.__setattr__(self, "y", as_q(self.y))
        object.__setattr__(self, "rotation", self.rotation % 4)


def rotate_point(x, y, quarter_turns: int):
    r = quarter_turns % 4
    if r == 0:
        return x, y
    if r == 1:
        return -y, x
    if r == 2:
        return -x, -y
    return y, -x


def _rotate_box(box: Box, r: int) -> Box:
    if r == 0:
        return box
    ax, ay = rotate_point(box.x0, box.y0, r)
    bx, by = rotate_point(box.x1, box.y1, r)
    return Box(min(ax, bx), min(ay, by), max(ax, bx), max(ay, by))


def shape_rects(shape: Solid, p: Placement) -> List[Box]:
    """Constituent closed rectangles of a placed solid, in bin coordinates."""
    return [_rotate_box(b, p.rotation).shifted(p.x, p.y) for b in shape.rects()]


def shape_segments(skel: Skeleton, p: Placement) -> List[Box]:
    """Segments of a placed skeleton (as degenerate boxes), in bin coordinates."""
    return [_rotate_box(b, p.rotation).shifted(p.x, p.y) for b in skel.segments()]


def _parts(shape, p: Placement) -> List[Box]:
    if is_skeleton(shape):
        return shape_segments(shape, p)
    return shape_rects(shape, p)


def bounding_box(boxes: Iterable[Box]) -> Box:
    boxes = list(boxes)
    return Box(
        min(b.x0 for b in boxes),
        min(b.y0 for b in boxes),
        max(b.x1 for b in boxes),
        max(b.y1 for b in boxes),
    )


def _box_area(b: Optional[Box]) -> Fraction:
    if b is None:
        return ZERO
    return (b.x1 - b.x0) * (b.y1 - b.y0)


def _box_meet(a: Optional[Box], b: Optional[Box]) -> Optional[Box]:
    if a is None or b is None:
        return None
    x0, y0 = max(a.x0, b.x0), max(a.y0, b.y0)
    x1, y1 = min(a.x1, b.x1), min(a.y1, b.y1)
    if x0 > x1 or y0 > y1:
        return None
    return Box(x0, y0, x1, y1)


def _interiors_meet(a: Box, b: Box) -> bool:
    # degenerate boxes have empty interior
    return max(a.x0, b.x0) < min(a.x1, b.x1) and max(a.y0, b.y0) < min(a.y1, b.y1)


def rects_interior_disjoint(ra: Sequence[Box], rb: Sequence[Box]) -> bool:
    return not any(_interiors_meet(a, b) for a in ra for b in rb)


def interior_disjoint(shape_a: Solid, pa: Placement, shape_b: Solid, pb: Placement) -> bool:
    """True iff the two placed solids have disjoint interiors.

    Solids in different bins never conflict.
    """
    if pa.bin != pb.bin:
        return True
    return rects_interior_disjoint(shape_rects(shape_a, pa), shape_rects(shape_b, pb))


def skeleton_endpoints(segments: Sequence[Box]) -> set:
    """Unique extreme points (topmost, bottommost, leftmost, rightmost)."""
    points = set()
    for axis, pick in ((0, min), (0, max), (1, min), (1, max)):
        if axis == 0:
            value = pick(s.x0 if pick is min else s.x1 for s in segments)
            hits = [s for s in segments if (s.x0 if pick is min else s.x1) == value]
            # a vertical segment of positive length on the extreme line spoils uniqueness
            if any(s.y0 != s.y1 and s.x0 == s.x1 for s in hits):
                continue
            cand = {(value, s.y0) for s in hits}
        else:
            value = pick(s.y0 if pick is min else s.y1 for s in segments)
            hits = [s for s in segments if (s.y0 if pick is min else s.y1) == value]
            if any(s.x0 != s.x1 and s.y0 == s.y1 for s in hits):
                continue
            cand = {(s.x0, value) for s in hits}
        if len(cand) == 1:
            points |= cand
    return points


def segments_compatible(sa: Sequence[Box], sb: Sequence[Box]) -> bool:
    """Skeleton validity for two already-placed segment lists."""
    ends = None
    for a in sa:
        for b in sb:
            m = _box_meet(a, b)
            if m is None:
                continue
            if m.x0 != m.x1 or m.y0 != m.y1:
                return False  # overlap of positive length
            if ends is None:
                ends = skeleton_endpoints(sa) | skeleton_endpoints(sb)
            if (m.x0, m.y0) not in ends:
                return False
    return True


def skeleton_disjoint(skel_a: Skeleton, pa: Placement, skel_b: Skeleton, pb: Placement) -> bool:
    """True iff the two placed skeletons only touch at endpoints of one of them."""
    if pa.bin != pb.bin:
        return True
    return segments_compatible(shape_segments(skel_a, pa), shape_segments(skel_b, pb))


# ---------------------------------------------------------------------------
# packings


@dataclass
class Packing:
    """Ordered list of placed shapes."""

    items: List[Tuple[Shape, Placement]] = field(default_factory=list)

    def add(self, shape: Shape, placement: Placement) -> None:
        self.items.append((shape, placement))

    @property
    def bin_count(self) -> int:
        if not self.items:
            return 0
        return 1 + max(p.bin for _, p in self.items)

    def bins(self) -> dict:
        out: dict = {}
        for idx, (shape, p) in enumerate(self.items):
            out.setdefault(p.bin, []).append(idx)
        return out

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[Tuple[Shape, Placement]]:
        return iter(self.items)


@dataclass(frozen=True)
class Violation:
    kind: str  # "containment" | "overlap" | "mixed"
    items: Tuple[int, ...]
    bin: int
    detail: str = ""


UNIT = Box(ZERO, ZERO, ONE, ONE)


def validate_packing(packing: Packing, container: Optional[Box] = UNIT) -> List[Violation]:
    """Return every violation of the packing (empty list means valid).

    ``container=None`` skips containment, for packings in the plane."""
    violations: List[Violation] = []
    if not packing.items:
        return violations
    solids = [is_solid(s) for s, _ in packing.items]
    if any(solids) and not all(solids):
        violations.append(Violation("mixed", tuple(range(len(packing.items))), -1, "solids and skeletons mixed"))
        return violations
    skeletal = not solids[0]

    parts = []
    boxes = []
    for idx, (shape, p) in enumerate(packing.items):
        pr = _parts(shape, p)
        bb = bounding_box(pr)
        parts.append(pr)
        boxes.append(bb)
        if container is not None and (bb.x0 < container.x0 or bb.y0 < container.y0 or bb.x1 > container.x1 or bb.y1 > container.y1):
            violations.append(Violation("containment", (idx,), p.bin, f"extent {tuple(map(str, bb))}"))

    for b, members in sorted(packing.bins().items()):
        order = sorted(members, key=lambda i: boxes[i].x0)
        for pos, i in enumerate(order):
            bi = boxes[i]
            for j in order[pos + 1:]:
                bj = boxes[j]
                if bj.x0 > bi.x1 or (not skeletal and bj.x0 == bi.x1):
                    break
                if bj.y0 > bi.y1 or bi.y0 > bj.y1:
                    continue
                if skeletal:
                    ok = segments_compatible(parts[i], parts[j])
                else:
                    ok = rects_interior_disjoint(parts[i], parts[j])
                if not ok:
                    violations.append(Violation("overlap", tuple(sorted((i, j))), b))
    return violations


# ---------------------------------------------------------------------------
# stacks


def fits_on_stack(stack: Sequence[LShape], shape: LShape, width=ONE, height=ONE):
    """Position on top of a gravity stack, or ``None`` when it does not fit.

    The stack is given bottom-first; the new shape goes to ``(sum wx, sum wy)``.
    """
    sx = sum((s.wx for s in stack), ZERO)
    sy = sum((s.wy for s in stack), ZERO)
    if sx + shape.lx <= width and sy + shape.ly <= height:
        return (sx, sy)
    return None


@dataclass
class GravityStack:
    """Incremental stacked gravity packing inside a ``width x height`` box."""

    width: Fraction = ONE
    height: Fraction = ONE
    items: List[LShape] = field(default_factory=list)
    sum_wx: Fraction = ZERO
    sum_wy: Fraction = ZERO

    def offer(self, shape: LShape):
        if self.sum_wx + shape.lx <= self.width and self.sum_wy + shape.ly <= self.height:
            return (self.sum_wx, self.sum_wy)
        return None

    def push(self, shape: LShape):
        pos = self.offer(shape)
        if pos is None:
            raise ValueError("shape does not fit on the stack")
        self.items.append(shape)
        self.sum_wx += shape.wx
        self.sum_wy += shape.wy
        return pos

    @property
    def area(self) -> Fraction:
        return sum((s.area for s in self.items), ZERO)


def is_stacked(items: Sequence[Tuple[LShape, Placement]], strict: bool = True) -> bool:
    """True iff every arm, extended to the bin boundary, meets no other item.

    With ``strict`` the items must all be large (the setting in which every
    valid packing is stacked); otherwise ``ValueError`` is raised.
    """
    items = list(items)
    if strict and not all(s.is_large for s, _ in items):
        raise ValueError("is_stacked(strict=True) requires large L-shapes")
    rects = [shape_rects(s, p) for s, p in items]
    for i, (s, p) in enumerate(items):
        if p.rotation:
            raise ValueError("is_stacked expects unrotated L-shapes")
        extended = [
            Box(p.x, p.y, ONE, p.y + s.wy),
            Box(p.x, p.y, p.x + s.wx, ONE),
        ]
        for j, (_, q) in enumerate(items):
            if j == i or q.bin != p.bin:
                continue
            if not rects_interior_disjoint(extended, rects[j]):
                return False
    return True


def gravity_diagonal_positions(items: Sequence[LShape]) -> List[Tuple[Fraction, Fraction]]:
    """Reference points of a symmetric stack: prefix sums of widths on the diagonal."""
    out = []
    acc = ZERO
    for s in items:
        out.append((acc, acc))
        acc += s.wx
    return out


# ---------------------------------------------------------------------------
# rotations


def split_rotational_packing(packing: Packing) -> Packing:
    """Turn a packing with quarter-turn rotations into a translation-only one.

    Each source bin is split into one bin per rotation class present; that
    bin is then turned back by the class rotation about the bin centre, which
    leaves every item in canonical orientation.
    """
    out = Packing()
    next_bin = 0
    for b, members in sorted(packing.bins().items()):
        classes = sorted({packing.items[i][1].rotation for i in members})
        for r in classes:
            for i in members:
                shape, p = packing.items[i]
                if p.rotation != r:
                    continue
                # rotate the whole bin by -r about (1/2, 1/2)
                dx, dy = rotate_point(p.x - HALF, p.y - HALF, -r)
                out.add(shape, Placement(next_bin, dx + HALF, dy + HALF, 0))
            next_bin += 1
    return out

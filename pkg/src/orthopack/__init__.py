"""Exact online bin packing of orthogonal polygons: L-shapes, Z-shapes and
their skeletons."""

from .geometry import (
    LShape,
    LSkeleton,
    Packing,
    Placement,
    Rect,
    ZShape,
    ZSkeleton,
    interior_disjoint,
    skeleton_disjoint,
    validate_packing,
)
from .rational import Q, as_q, format_q, parse_q

__version__ = "0.1.0"

__all__ = [
    "LShape",
    "LSkeleton",
    "Packing",
    "Placement",
    "Rect",
    "ZShape",
    "ZSkeleton",
    "interior_disjoint",
    "skeleton_disjoint",
    "validate_packing",
    "Q",
    "as_q",
    "format_q",
    "parse_q",
]

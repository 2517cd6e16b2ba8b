from .base import BinCounter, OnlinePacker, PackerError
from .misc import (
    BudgetExceeded,
    CriticalDensityPacker,
    DensityLayout,
    LSkeletonPacker,
    NextFit,
    PerimeterPacker,
    SymmetricPacker,
    TrivialPacker,
)
from .small import DensePacker, NiceRectanglePacker, SmallLPacker, category_ab, rtiling_area, rtiling_positions
from .symmetric import LaSyLPacker, XRange, categorize, ikpp_occupancy

__all__ = [
    "BinCounter",
    "OnlinePacker",
    "PackerError",
    "BudgetExceeded",
    "CriticalDensityPacker",
    "DensityLayout",
    "LSkeletonPacker",
    "NextFit",
    "PerimeterPacker",
    "SymmetricPacker",
    "TrivialPacker",
    "DensePacker",
    "NiceRectanglePacker",
    "SmallLPacker",
    "category_ab",
    "rtiling_area",
    "rtiling_positions",
    "LaSyLPacker",
    "XRange",
    "categorize",
    "ikpp_occupancy",
]

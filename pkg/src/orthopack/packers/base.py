"""Common contract for online packers: receive an item, return an
irrevocable placement."""

from __future__ import annotations

from typing import Iterable, List

from ..geometry import Packing, Placement


class PackerError(RuntimeError):
    """The packer broke one of its own guarantees."""


class OnlinePacker:
    """Base class.  Subclasses implement :meth:`_place`."""

    name = "online"

    def __init__(self):
        self.packing = Packing()

    def place(self, item) -> Placement:
        p = self._place(item)
        self.packing.add(item, p)
        return p

    def _place(self, item) -> Placement:  # pragma: no cover - abstract
        raise NotImplementedError

    def run(self, items: Iterable) -> Packing:
        for item in items:
            self.place(item)
        return self.packing

    @property
    def bins_used(self) -> int:
        return self.packing.bin_count


class BinCounter:
    """Shared source of fresh bin indices for packers with several pools."""

    def __init__(self):
        self.next = 0

    def fresh(self) -> int:
        b = self.next
        self.next += 1
        return b


def pack_all(packer: OnlinePacker, items: Iterable) -> List[Placement]:
    return [packer.place(it) for it in items]

"""JSON instance and packing files with exact rational strings, plus the
line-oriented trace formats."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

from .geometry import LShape, LSkeleton, Packing, Placement, Rect, ZShape, ZSkeleton
from .rational import format_q, parse_q

FIELDS: Dict[str, Tuple[type, Tuple[str, ...]]] = {
    "lshape": (LShape, ("lx", "wx", "ly", "wy")),
    "lskeleton": (LSkeleton, ("lx", "ly")),
    "zshape": (ZShape, ("w", "a", "b", "t_a", "t_b", "t")),
    "zskeleton": (ZSkeleton, ("w", "a", "b")),
    "rect": (Rect, ("width", "height")),
}
KINDS = tuple(FIELDS) + ("binsorting",)


def kind_of(shape) -> str:
    for kind, (cls, _) in FIELDS.items():
        if type(shape) is cls:
            return kind
    raise TypeError(f"no file kind for {type(shape).__name__}")


def shape_to_dict(shape) -> Dict[str, str]:
    _, names = FIELDS[kind_of(shape)]
    return {name: format_q(getattr(shape, name)) for name in names}


def shape_from_dict(kind: str, data: Dict[str, Any]):
    cls, names = FIELDS[kind]
    missing = [n for n in names if n not in data]
    if missing:
        raise ValueError(f"{kind} item lacks fields {missing}")
    return cls(*(parse_q(str(data[n])) for n in names))


@dataclass
class InstanceFile:
    kind: str
    items: List[Any]
    meta: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> str:
        if self.kind == "binsorting":
            items = [int(v) for v in self.items]
        else:
            items = [shape_to_dict(s) for s in self.items]
        return json.dumps({"kind": self.kind, "meta": self.meta, "items": items}, indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "InstanceFile":
        data = json.loads(text)
        kind = data.get("kind")
        if kind not in KINDS:
            raise ValueError(f"unknown instance kind {kind!r}")
        raw = data.get("items", [])
        if kind == "binsorting":
            items = [int(v) for v in raw]
        else:
            items = [shape_from_dict(kind, d) for d in raw]
        return cls(kind, items, data.get("meta", {}))


def load_instance(path: str) -> InstanceFile:
    with open(path) as fh:
        return InstanceFile.from_json(fh.read())


def save_instance(inst: InstanceFile, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(inst.to_json())


def packing_to_json(packing: Packing, meta: Dict[str, Any] = None) -> str:
    kinds = {kind_of(s) for s, _ in packing}
    rows = []
    for s, p in packing:
        row = {"kind": kind_of(s), **shape_to_dict(s), "bin": p.bin, "x": format_q(p.x), "y": format_q(p.y)}
        if p.rotation:
            row["rotation"] = p.rotation
        rows.append(row)
    kind = kinds.pop() if len(kinds) == 1 else ("mixed" if kinds else "empty")
    return json.dumps({"kind": kind, "meta": meta or {}, "items": rows}, indent=1, sort_keys=True) + "\n"


def packing_from_json(text: str) -> Packing:
    data = json.loads(text)
    pk = Packing()
    for row in data.get("items", []):
        kind = row.get("kind", data.get("kind"))
        shape = shape_from_dict(kind, row)
        pk.add(shape, Placement(int(row["bin"]), parse_q(row["x"]), parse_q(row["y"]), int(row.get("rotation", 0))))
    return pk


def load_packing(path: str) -> Packing:
    with open(path) as fh:
        return packing_from_json(fh.read())


def save_packing(packing: Packing, path: str, meta: Dict[str, Any] = None) -> None:
    with open(path, "w") as fh:
        fh.write(packing_to_json(packing, meta))


def format_ztrace(rows: Sequence[Tuple[int, Fraction, Fraction, Fraction, Fraction]]) -> str:
    """One line per turn: ``i, w, a, b, x_response``."""
    return "".join(f"{i}, {format_q(w)}, {format_q(a)}, {format_q(b)}, {format_q(x)}\n" for i, w, a, b, x in rows)


def parse_ztrace(text: str) -> List[Tuple[int, Fraction, Fraction, Fraction, Fraction]]:
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 5:
            raise ValueError(f"bad trace line: {line!r}")
        rows.append((int(parts[0]), *(parse_q(p) for p in parts[1:])))
    return rows

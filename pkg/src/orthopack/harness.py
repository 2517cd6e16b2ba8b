"""Seeded instance generators, the match runner with bound audits, the
adversary runner and the line protocol for external algorithms."""

from __future__ import annotations

import math
import random
import shlex
import subprocess
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import io as fio
from .adversaries import (
    FirstFitGravityPacker,
    POLICIES,
    base_separation,
    certificate_eps,
    density_ub_capacity,
    density_ub_instance,
    horizontal_gaps,
    lk_presenter_match,
    lk_shape,
    play_zadversary,
    thickened_certificate,
    thickness_for,
    zskel_certificate,
)
from .binsorting import (
    first_fit_leftmost,
    format_trace,
    middle_slot_algorithm,
    play_presenter,
    play_sequence,
    random_algorithm,
    sort_lower_bound,
)
from .geometry import UNIT, LShape, LSkeleton, Packing, Placement, Violation, validate_packing
from .oracles import MAX_EXACT, area_lower_bound, opt_bins_1d, opt_bins_large_symmetric
from .packers import (
    CriticalDensityPacker,
    DensityLayout,
    LaSyLPacker,
    LSkeletonPacker,
    OnlinePacker,
    PackerError,
    PerimeterPacker,
    SmallLPacker,
    SymmetricPacker,
    TrivialPacker,
)
from .rational import as_q, format_q, parse_q

HALF = Fraction(1, 2)
ZERO = Fraction(0)
PERIMETER_CONSTANT = 16

# ---------------------------------------------------------------------------
# generators


def _q(rng: random.Random, lo: int, hi: int, den: int) -> Fraction:
    return Fraction(rng.randint(lo, hi), den)


def _thin(rng: random.Random, length: Fraction) -> Fraction:
    """A width in (0, length] spread over several dyadic scales."""
    return length * Fraction(rng.randint(1, 16), 16) / 2 ** rng.randint(0, 7)


def gen_uniform_small(n: int, rng: random.Random, symmetric: bool = False) -> List[LShape]:
    out = []
    for _ in range(n):
        lx = _q(rng, 1, 128, 256)
        ly = lx if symmetric else _q(rng, 1, 128, 256)
        wx = _thin(rng, lx)
        wy = wx if symmetric else _thin(rng, ly)
        out.append(LShape(lx, min(wx, lx), ly, min(wy, ly)))
    return out


def gen_large_symmetric(n: int, rng: random.Random) -> List[LShape]:
    out = []
    for _ in range(n):
        length = _q(rng, 128, 256, 256)
        out.append(LShape.symmetric(length, _thin(rng, length)))
    return out


def gen_symmetric_mixed(n: int, rng: random.Random) -> List[LShape]:
    return [
        gen_large_symmetric(1, rng)[0] if rng.random() < 0.3 else gen_uniform_small(1, rng, symmetric=True)[0]
        for _ in range(n)
    ]


def gen_lshape_any(n: int, rng: random.Random) -> List[LShape]:
    out = []
    for _ in range(n):
        scale = Fraction(1, 2 ** rng.randint(0, 4))
        lx, ly = scale * _q(rng, 1, 64, 64), scale * _q(rng, 1, 64, 64)
        out.append(LShape(lx, _thin(rng, lx), ly, _thin(rng, ly)))
    return out


def gen_skeleton_mixed(n: int, rng: random.Random, groups: Sequence[str] = ("S1", "S2", "S3")) -> List[LSkeleton]:
    out = []
    for _ in range(n):
        g = rng.choice(groups)
        if g == "S1":
            out.append(LSkeleton(_q(rng, 0, 63, 64), _q(rng, 0, 63, 64)))
        elif g == "S2":
            out.append(LSkeleton(Fraction(1), _q(rng, 1, 64, 64)))
        else:
            out.append(LSkeleton(_q(rng, 1, 63, 64), Fraction(1)))
    return out


def gen_density_budget(n: int, rng: random.Random, t) -> List[LShape]:
    """Up to ``n`` shapes with arms at most ``t`` and total area within
    ``(1-t)^3/125``; arm lengths cover all four large/small classes."""
    t = as_q(t)
    L = DensityLayout(t)
    left = L.budget
    den = 2**24
    out = []
    for _ in range(n):
        share = left * Fraction(rng.randint(1, 8), 8) / max(1, (n - len(out)) // 2)
        arms = []
        for _ in range(2):
            if rng.random() < 0.5 and t > L.a:
                arms.append(L.a + (t - L.a) * Fraction(rng.randint(1, 64), 64))
            else:
                arms.append(L.a * Fraction(rng.randint(1, 64), 64))
        lx, ly = arms
        cap = share / (lx + ly)
        wx = min(lx, Fraction(math.floor(cap * rng.randint(1, 4) / 4 * den), den))
        wy = min(ly, Fraction(math.floor(cap * rng.randint(1, 4) / 4 * den), den))
        if wx == 0 or wy == 0:
            continue
        s = LShape(lx, wx, ly, wy)
        if s.area > left:
            break
        left -= s.area
        out.append(s)
    return out


GENERATORS = ("uniform-small", "large-symmetric", "symmetric-mixed", "lshape-any", "lk", "skeleton-mixed", "density-budget")


def generate(family: str, n: int, seed: int = 0, t=None) -> fio.InstanceFile:
    """Reproducible instance of ``family``; the same arguments give the same bytes."""
    rng = random.Random(f"{family}:{n}:{seed}")
    meta: Dict[str, Any] = {"family": family, "seed": seed, "n": n}
    if family == "uniform-small":
        return fio.InstanceFile("lshape", gen_uniform_small(n, rng), meta)
    if family == "large-symmetric":
        return fio.InstanceFile("lshape", gen_large_symmetric(n, rng), meta)
    if family == "symmetric-mixed":
        return fio.InstanceFile("lshape", gen_symmetric_mixed(n, rng), meta)
    if family == "lshape-any":
        return fio.InstanceFile("lshape", gen_lshape_any(n, rng), meta)
    if family == "lk":
        return fio.InstanceFile("lshape", [lk_shape(i, n) for i in range(1, n + 1)], meta)
    if family == "skeleton-mixed":
        return fio.InstanceFile("lskeleton", gen_skeleton_mixed(n, rng), meta)
    if family == "density-budget":
        t = HALF if t is None else as_q(t)
        meta["t"] = format_q(t)
        return fio.InstanceFile("lshape", gen_density_budget(n, rng, t), meta)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(GENERATORS)}")


# ---------------------------------------------------------------------------
# external algorithms


class SubprocessPacker(OnlinePacker):
    """Talks to an external program: one item per line on its stdin
    (``kind`` then the shape fields as rational strings), one ``bin x y``
    answer per line on its stdout."""

    name = "custom"

    def __init__(self, command: str):
        super().__init__()
        self.proc = subprocess.Popen(
            shlex.split(command), stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1
        )

    def _place(self, item) -> Placement:
        fields = fio.shape_to_dict(item)
        self.proc.stdin.write(" ".join([fio.kind_of(item), *fields.values()]) + "\n")
        self.proc.stdin.flush()
        answer = self.proc.stdout.readline()
        if not answer:
            raise PackerError("external algorithm closed its output")
        parts = answer.split()
        if len(parts) != 3:
            raise PackerError(f"expected 'bin x y', got {answer!r}")
        return Placement(int(parts[0]), parse_q(parts[1]), parse_q(parts[2]))

    def close(self) -> None:
        if self.proc.stdin:
            self.proc.stdin.close()
        self.proc.wait(timeout=10)


# ---------------------------------------------------------------------------
# match runner


@dataclass
class MatchResult:
    algorithm: str
    objective: str  # "bins" | "arrays" | "perimeter"
    value: Any
    reference: Any = None  # optimum or lower bound
    provenance: str = ""  # which oracle produced ``reference`` and ``bound``
    bound: Any = None
    passed: Optional[bool] = None  # None when no bound was audited
    valid: bool = True
    violations: List[Violation] = field(default_factory=list)
    packing: Optional[Packing] = None
    certificate: Optional[Packing] = None
    trace: str = ""
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.valid and self.passed is not False

    def summary(self) -> str:
        parts = [f"algorithm={self.algorithm}", f"{self.objective}={self.value}"]
        if self.reference is not None:
            parts.append(f"reference={self.reference} [{self.provenance}]")
        if self.bound is not None:
            parts.append(f"bound={self.bound}")
        parts.append("valid" if self.valid else f"INVALID ({len(self.violations)} violations)")
        if self.passed is not None:
            parts.append("audit=PASS" if self.passed else "audit=FAIL")
        parts.extend(f"{k}={v}" for k, v in self.notes.items())
        return " ".join(parts)

    def to_dict(self) -> Dict[str, Any]:
        def enc(v):
            return format_q(v) if isinstance(v, Fraction) else v

        return {
            "algorithm": self.algorithm,
            "objective": self.objective,
            "value": enc(self.value),
            "reference": enc(self.reference),
            "provenance": self.provenance,
            "bound": enc(self.bound),
            "passed": self.passed,
            "valid": self.valid,
            "violations": [v.__dict__ for v in self.violations],
            "notes": {k: enc(v) for k, v in self.notes.items()},
        }


ALGORITHMS: Dict[str, Tuple[str, ...]] = {
    "trivial": ("lshape", "lskeleton", "zshape", "zskeleton", "rect"),
    "lasyl": ("lshape",),
    "smalll": ("lshape",),
    "symmetric": ("lshape",),
    "lskel": ("lskeleton",),
    "critical-density": ("lshape",),
    "perimeter": ("lshape",),
    "middle-slot-sort": ("binsorting",),
    "custom-via-trace": ("lshape", "lskeleton", "zshape", "zskeleton", "rect"),
}


class RoutingError(ValueError):
    """The instance kind does not match the algorithm's family."""


def _make_packer(algorithm: str, inst: fio.InstanceFile, command: Optional[str]) -> OnlinePacker:
    if algorithm == "trivial":
        return TrivialPacker()
    if algorithm == "lasyl":
        return LaSyLPacker()
    if algorithm == "smalll":
        return SmallLPacker()
    if algorithm == "symmetric":
        return SymmetricPacker()
    if algorithm == "lskel":
        return LSkeletonPacker()
    if algorithm == "critical-density":
        if "t" not in inst.meta:
            raise RoutingError("critical-density needs the arm bound t in the instance metadata")
        return CriticalDensityPacker(parse_q(str(inst.meta["t"])))
    if algorithm == "perimeter":
        return PerimeterPacker()
    if algorithm == "custom-via-trace":
        if not command:
            raise RoutingError("custom-via-trace needs an external command")
        return SubprocessPacker(command)
    raise RoutingError(f"unknown algorithm {algorithm!r}")


def _check_family(algorithm: str, inst: fio.InstanceFile) -> None:
    if algorithm not in ALGORITHMS:
        raise RoutingError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    if inst.kind not in ALGORITHMS[algorithm]:
        raise RoutingError(f"algorithm {algorithm} does not accept {inst.kind} instances")
    items = inst.items
    if algorithm == "lasyl" and not all(s.is_symmetric and s.is_large for s in items):
        raise RoutingError("lasyl takes large symmetric L-shapes only")
    if algorithm == "smalll" and not all(s.is_small for s in items):
        raise RoutingError("smalll takes small L-shapes only (both arms <= 1/2)")
    if algorithm == "symmetric" and not all(s.is_symmetric for s in items):
        raise RoutingError("symmetric takes symmetric L-shapes only")


def placement_trace(packing: Packing) -> str:
    """One line per item: ``i, bin, x, y``."""
    return "".join(f"{i}, {p.bin}, {format_q(p.x)}, {format_q(p.y)}\n" for i, (_, p) in enumerate(packing, 1))


def _audit(algorithm: str, inst: fio.InstanceFile, packer: OnlinePacker, res: MatchResult) -> None:
    items = inst.items
    bins = res.value
    if algorithm == "trivial":
        res.reference, res.provenance, res.bound = len(items), "item-count", len(items)
        res.passed = bins == len(items)
    elif algorithm == "lasyl":
        if len(items) <= MAX_EXACT:
            opt = opt_bins_large_symmetric(items)
            res.reference, res.provenance, res.bound = opt, "edd-exact", 33 * opt + 2
            res.passed = bins <= res.bound
            res.notes.update(short=packer.short_bin_count, long=packer.long_bin_count)
        else:
            res.reference, res.provenance = area_lower_bound([s.area for s in items]), "area (no audit above 15 items)"
    elif algorithm == "smalll":
        area = sum((s.area for s in items), ZERO)
        res.reference, res.provenance, res.bound = area, "area", 8 * area + 7
        res.passed = bins <= res.bound
    elif algorithm == "symmetric":
        large = [s for s in items if s.lx > HALF]
        lb = area_lower_bound([s.area for s in items])
        tag = "area"
        if large and len(large) <= MAX_EXACT:
            lb = max(lb, opt_bins_large_symmetric(large))
            tag = "max(area, edd-exact on large pool)"
        res.reference, res.provenance, res.bound = lb, tag, 41 * lb + 9
        res.passed = bins <= res.bound
    elif algorithm == "lskel":
        s2 = [s.ly for s in items if s.lx == 1]
        s3 = [s.lx for s in items if s.ly == 1 and s.lx < 1]
        s1 = any(s.lx < 1 and s.ly < 1 for s in items)
        if len(s2) <= MAX_EXACT and len(s3) <= MAX_EXACT:
            o2, o3 = opt_bins_1d(s2), opt_bins_1d(s3)
            res.reference, res.provenance = max(o2, o3, int(s1)), "1d-exact"
            res.bound = 2 * (o2 + o3) + int(s1)
            res.passed = bins <= res.bound
    elif algorithm == "critical-density":
        L = packer.layout
        area = sum((s.area for s in items), ZERO)
        res.reference, res.provenance, res.bound = min(1, len(items)), "one-bin budget", 1
        res.passed = bins <= 1
        res.notes.update(area=area, budget=L.budget)
    elif algorithm == "perimeter":
        res.reference = max(2 * (packer.max_lx + packer.max_ly), ZERO)
        res.provenance = "max(2(W*+H*), 4 sqrt(area))"
        res.bound = PERIMETER_CONSTANT
        res.passed = packer.within_constant(PERIMETER_CONSTANT)


def run_match(
    inst: fio.InstanceFile, algorithm: str, bound_audit: bool = False, command: Optional[str] = None
) -> MatchResult:
    """Run ``algorithm`` on the instance, validate the packing from its
    serialized form, and optionally audit the algorithm's guarantee."""
    _check_family(algorithm, inst)
    if algorithm == "middle-slot-sort":
        k = int(inst.meta.get("k", len(inst.items) or 1))
        game = play_sequence(inst.items, k, middle_slot_algorithm)
        res = MatchResult(algorithm, "arrays", game.array_count, trace=format_trace(game))
        res.valid = game.check_sorted()
        if bound_audit:
            res.reference, res.provenance = -(-len(inst.items) // k), "sorted-offline"
            res.bound = sort_lower_bound(len(inst.items), k)
            res.passed = game.array_count <= res.bound
        return res
    packer = _make_packer(algorithm, inst, command)
    try:
        packer.run(inst.items)
    finally:
        if isinstance(packer, SubprocessPacker):
            packer.close()
    packing = packer.packing
    objective = "perimeter" if algorithm == "perimeter" else "bins"
    value = packer.perimeter if algorithm == "perimeter" else packer.bins_used
    res = MatchResult(algorithm, objective, value, packing=packing, trace=placement_trace(packing))
    reread = fio.packing_from_json(fio.packing_to_json(packing))
    res.violations = validate_packing(reread, None if algorithm == "perimeter" else UNIT)
    res.valid = not res.violations
    if bound_audit:
        _audit(algorithm, inst, packer, res)
    return res


# ---------------------------------------------------------------------------
# adversaries

ADVERSARIES = ("binsorting", "lk", "zskel", "zshape", "density-ub")
SORT_ALGORITHMS: Dict[str, Callable[[int], Callable]] = {
    "middle-slot": lambda seed: middle_slot_algorithm,
    "first-fit": lambda seed: first_fit_leftmost,
    "random": random_algorithm,
}
MAX_ADVERSARY_N = {"binsorting": 64, "lk": 24, "zskel": 24, "zshape": 16, "density-ub": 4096}


def run_adversary(family: str, n: int, algorithm: Optional[str] = None, seed: int = 0, t=None) -> MatchResult:
    """Play a lower-bound adversary and validate its one-bin certificate."""
    if family not in ADVERSARIES:
        raise RoutingError(f"unknown adversary {family!r}; choose from {', '.join(ADVERSARIES)}")
    if not 1 <= n <= MAX_ADVERSARY_N[family]:
        raise RoutingError(f"{family} adversary takes 1 <= n <= {MAX_ADVERSARY_N[family]}")
    if family == "binsorting":
        algorithm = algorithm or "middle-slot"
        if algorithm not in SORT_ALGORITHMS:
            raise RoutingError(f"binsorting algorithms: {', '.join(SORT_ALGORITHMS)}")
        match = play_presenter(n, n, SORT_ALGORITHMS[algorithm](seed))
        forced = sort_lower_bound(n, n)
        return MatchResult(
            algorithm, "arrays", match.arrays, 1, "sorted-offline", forced, match.arrays >= forced,
            valid=match.game.check_sorted(), trace=format_trace(match.game),
        )
    if family == "lk":
        algorithm = algorithm or "first-fit-gravity"
        packers = {"first-fit-gravity": FirstFitGravityPacker, "trivial": TrivialPacker}
        if algorithm not in packers:
            raise RoutingError(f"lk algorithms: {', '.join(packers)}")
        m = lk_presenter_match(n, packers[algorithm]())
        cert_bad = validate_packing(m.certificate)
        bad = validate_packing(m.packing)
        res = MatchResult(
            algorithm, "bins", m.bins, m.certificate.bin_count, "descending-stack certificate", m.forced,
            m.bins >= m.forced and not cert_bad and m.certificate.bin_count == 1,
            valid=not bad, violations=bad, packing=m.packing, certificate=m.certificate,
            trace=format_trace(m.game),
        )
        return res
    if family in ("zskel", "zshape"):
        algorithm = algorithm or "random"
        if algorithm not in POLICIES:
            raise RoutingError(f"zskel policies: {', '.join(POLICIES)}")
        thick = thickness_for(n) if family == "zshape" else None
        m = play_zadversary(n, algorithm, seed, thickness=thick)
        cert = zskel_certificate(m.skeletons) if thick is None else thickened_certificate(m.skeletons, thick)
        cert_bad = validate_packing(cert)
        gap = horizontal_gaps(cert if thick is None else zskel_certificate(m.skeletons))
        need = certificate_eps(n) / n
        bad = validate_packing(m.packing)
        res = MatchResult(
            algorithm, "bins", m.bins, cert.bin_count, "ordered-subdivision certificate", n,
            m.bins == n and not cert_bad and cert.bin_count == 1 and gap >= need,
            valid=not bad, violations=bad, packing=m.packing, certificate=cert,
            trace=fio.format_ztrace(m.trace_rows()),
        )
        res.notes.update(min_gap=gap, base_separation=base_separation(m.skeletons))
        return res
    # density-ub
    t = Fraction(3, 4) if t is None else as_q(t)
    w = (1 - t) / 4
    cap = density_ub_capacity(t, w)
    items = density_ub_instance(t, w, n)
    packer = FirstFitGravityPacker()
    packer.run(items)
    per_bin = max(len(v) for v in packer.packing.bins().values())
    need = -(-n // cap)
    bad = validate_packing(packer.packing)
    res = MatchResult(
        algorithm or "first-fit-gravity", "bins", packer.bins_used, need, "per-bin capacity", need,
        packer.bins_used >= need and per_bin <= cap, valid=not bad, violations=bad, packing=packer.packing,
        trace=placement_trace(packer.packing),
    )
    res.notes.update(capacity=cap, t=t, w=w)
    return res

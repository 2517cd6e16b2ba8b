"""Exact optima and lower bounds on tractable families.

There is no exact optimum for arbitrary L- or Z-shape instances at this
scale (placements are continuous).  Bound checks therefore use exact
oracles where the family allows it (large symmetric L-shapes reduce to
single-machine deadline scheduling, skeleton stacks reduce to 1-D bin
packing), area lower bounds, or explicit one-bin certificates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .geometry import LShape, fits_on_stack

__all__ = [
    "edd_feasible",
    "edd_feasible_bruteforce",
    "opt_bins_large_symmetric",
    "opt_bins_large_symmetric_bruteforce",
    "opt_bins_1d",
    "opt_bins_1d_bruteforce",
    "min_cover",
    "area_lower_bound",
    "CompetitiveReport",
    "competitive_report",
]

MAX_EXACT = 15


def _check_large_symmetric(items: Sequence[LShape]) -> None:
    for s in items:
        if not (s.is_symmetric and s.is_large):
            raise ValueError(f"not a large symmetric L-shape: {s}")


def edd_feasible(items: Sequence[LShape]) -> bool:
    """One-bin feasibility: stack in order of deadline ``1 - l + w``."""
    _check_large_symmetric(items)
    start = Fraction(0)
    for s in sorted(items, key=lambda s: 1 - s.lx + s.wx):
        if start > 1 - s.lx:
            return False
        start += s.wx
    return True


def edd_feasible_bruteforce(items: Sequence[LShape]) -> bool:
    """Try every stacking order with the stack-top test."""
    for order in itertools.permutations(items):
        stack: List[LShape] = []
        for s in order:
            if fits_on_stack(stack, s) is None:
                break
            stack.append(s)
        else:
            return True
    return not items


def _to_ints(values: Sequence[Fraction]) -> List[int]:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in values]


def min_cover(feasible: np.ndarray, n: int) -> int:
    """Fewest feasible sets covering ``{0..n-1}``; ``feasible`` is a boolean
    array over bitmasks and must be closed under taking subsets.

    Uses the subset-sum (zeta) transform: the number of ``b``-tuples of
    feasible sets whose union is everything is
    ``sum_S (-1)^(n-|S|) g(S)^b`` with ``g(S)`` the number of feasible subsets
    of ``S``.
    """
    if n == 0:
        return 0
    g = feasible.astype(np.int64)
    idx = np.arange(1 << n)
    for i in range(n):
        bit = 1 << i
        has = (idx & bit) != 0
        g[has] += g[idx[has] ^ bit]
    sizes = np.array([bin(m).count("1") for m in range(1 << n)])
    sign = np.where((n - sizes) % 2 == 0, 1, -1).astype(object)
    base = g.astype(object)
    power = np.ones(1 << n, dtype=object)
    for b in range(1, n + 1):
        power = power * base
        if np.dot(sign, power) > 0:
            return b
    raise AssertionError("no cover found; feasibility not subset-closed?")


def opt_bins_large_symmetric(items: Sequence[LShape]) -> int:
    """Exact minimum number of bins for large symmetric L-shapes (n <= 15)."""
    _check_large_symmetric(items)
    n = len(items)
    if n > MAX_EXACT:
        raise ValueError(f"exact optimum limited to {MAX_EXACT} items")
    if n == 0:
        return 0
    order = sorted(items, key=lambda s: 1 - s.lx + s.wx)
    ints = _to_ints([s.wx for s in order] + [1 - s.lx for s in order])
    w, xhat = ints[:n], ints[n:]
    dtype = np.int64 if max(ints) * (n + 1) < 2**62 else object
    feasible = np.ones(1, dtype=bool)
    total = np.zeros(1, dtype=dtype)
    # item i has the i-th deadline; in any subset the latest one starts after all others
    for i in range(n):
        feasible = np.concatenate([feasible, feasible & (total <= xhat[i])])
        total = np.concatenate([total, total + w[i]])
    return min_cover(feasible, n)


def _partitions(seq):
    if not seq:
        yield []
        return
    first, rest = seq[0], seq[1:]
    for part in _partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def opt_bins_large_symmetric_bruteforce(items: Sequence[LShape]) -> int:
    """Exhaustive set partitions with permutation feasibility (tiny n only)."""
    best = len(items)
    for part in _partitions(list(items)):
        if len(part) < best and all(edd_feasible_bruteforce(block) for block in part):
            best = len(part)
    return best


def opt_bins_1d(sizes: Sequence, capacity=1) -> int:
    """Exact 1-D bin packing optimum by the (bins, last fill) subset DP."""
    sizes = [Fraction(s) for s in sizes]
    capacity = Fraction(capacity)
    n = len(sizes)
    if n > MAX_EXACT:
        raise ValueError(f"exact optimum limited to {MAX_EXACT} items")
    if n == 0:
        return 0
    if any(s > capacity or s < 0 for s in sizes):
        raise ValueError("item larger than the capacity")
    ints = _to_ints(sizes + [capacity])
    sz, cap = ints[:n], ints[n]
    INF = (n + 1, 0)
    best = [INF] * (1 << n)
    best[0] = (1, 0)
    for m in range(1 << n):
        bins, fill = best[m]
        if bins > n:
            continue
        for i in range(n):
            bit = 1 << i
            if m & bit:
                continue
            cand = (bins, fill + sz[i]) if fill + sz[i] <= cap else (bins + 1, sz[i])
            if cand < best[m | bit]:
                best[m | bit] = cand
    return best[-1][0]


def opt_bins_1d_bruteforce(sizes: Sequence, capacity=1) -> int:
    sizes = [Fraction(s) for s in sizes]
    best = len(sizes)
    for part in _partitions(sizes):
        if len(part) < best and all(sum(block) <= capacity for block in part):
            best = len(part)
    return best


def area_lower_bound(areas: Sequence, capacity=1) -> int:
    total = sum((Fraction(a) for a in areas), Fraction(0))
    return math.ceil(total / Fraction(capacity))


@dataclass(frozen=True)
class CompetitiveReport:
    bins: Fraction
    opt: Fraction
    beta: Fraction
    absolute: Optional[Fraction]
    asymptotic: Optional[Fraction]
    valid: bool

    def line(self) -> str:
        if not self.valid:
            return f"bins={self.bins} opt={self.opt} INVALID"
        return f"bins={self.bins} opt={self.opt} absolute={self.absolute} asymptotic(beta={self.beta})={self.asymptotic}"


def competitive_report(bins, opt, beta=0) -> CompetitiveReport:
    bins, opt, beta = Fraction(bins), Fraction(opt), Fraction(beta)
    if opt == 0:
        ok = bins == 0
        return CompetitiveReport(bins, opt, beta, Fraction(1) if ok else None, Fraction(1) if ok else None, ok)
    return CompetitiveReport(bins, opt, beta, bins / opt, (bins - beta) / opt, True)

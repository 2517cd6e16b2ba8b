"""Exact rational helpers.

Every coordinate and length in the package is a :class:`fractions.Fraction`.
Floats are rejected at the boundary so that no rounding can leak into the
geometric predicates.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC

__all__ = ["Q", "Fraction", "as_q", "parse_q", "format_q", "pow2", "floor_log2"]

Q = Fraction

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def as_q(value) -> Fraction:
    """Coerce ``value`` to a Fraction.

    Accepts ints, Fractions, other exact rationals and canonical strings.
    Floats raise ``TypeError``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_q(value)
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}: {value!r}")


def parse_q(text: str) -> Fraction:
    """Parse the canonical ``p/q`` (or ``p``) form."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_q(value) -> str:
    """Canonical string: ``p/q`` in lowest terms, ``p`` when ``q == 1``."""
    return str(as_q(value))


def pow2(e: int) -> Fraction:
    """``2**e`` as an exact Fraction, for negative exponents too."""
    if e >= 0:
        return Fraction(1 << e)
    return Fraction(1, 1 << -e)


def floor_log2(v: Fraction) -> int:
    """Largest integer ``e`` with ``2**e <= v`` (``v > 0``)."""
    if v <= 0:
        raise ValueError("floor_log2 needs a positive argument")
    p, q = v.numerator, v.denominator
    e = p.bit_length() - q.bit_length()
    # 2**e <= p/q  <=>  p << -e >= q  (or p >= q << e)
    if e >= 0:
        if p < (q << e):
            e -= 1
    else:
        if (p << -e) < q:
            e -= 1
    return e

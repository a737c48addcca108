"""Exact rational parsing and formatting shared across the package."""

from __future__ import annotations

import re
from decimal import Decimal
from fractions import Fraction
from numbers import Rational

_RATIO = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*$")
_DECIMAL = re.compile(r"^\s*[+-]?(\d+(\.\d*)?|\.\d+)\s*$")

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def as_rational(value) -> Fraction:
    """Convert ``value`` to a Fraction without ever passing through binary floating point.

    Accepted inputs are ints, Fractions (or any ``numbers.Rational``), finite
    Decimals, and strings written as ``"a/b"`` or as plain terminating decimals
    such as ``"0.125"``. Python floats are refused because their binary
    expansion would silently replace the intended value.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities or costs")
    if isinstance(value, Fraction) and type(value.numerator) is int:
        return value
    if isinstance(value, Rational):
        # normalise numpy integers and Fractions built from them to plain ints
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise ValueError(f"non-finite decimal {value}")
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError(
            f"binary float {value!r} rejected; pass a Fraction, an int, or a string like '1/3'"
        )
    if isinstance(value, str):
        m = _RATIO.match(value)
        if m:
            den = int(m.group(2))
            if den == 0:
                raise ValueError(f"zero denominator in {value!r}")
            return Fraction(int(m.group(1)), den)
        if _DECIMAL.match(value):
            return Fraction(Decimal(value.strip()))
        raise ValueError(f"cannot read {value!r} as an exact rational")
    raise TypeError(f"unsupported rational input of type {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """Render as ``num/den`` (integers keep a ``/1`` so every cell parses the same way)."""
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, digits: int) -> str:
    """Round half-even to ``digits`` places for display only."""
    q = Decimal(1).scaleb(-digits)
    d = (Decimal(value.numerator) / Decimal(value.denominator)).quantize(q)
    if d == 0:
        d = abs(d)
    return f"{d:.{digits}f}"

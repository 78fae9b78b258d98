"""Rational helpers on top of :class:`fractions.Fraction`.

``Fraction`` already keeps values in lowest terms with a positive
denominator, so it is used directly as the rational type.  This module only
adds parsing and formatting conventions shared by the JSON schemas and the
CLI: rationals travel as strings such as ``"13/16"`` so no float rounding
can creep into a report.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

Q = Fraction


def parse_rational(value) -> Fraction:
    """Parse ``"3/8"``, ``"0.25"``, ``3`` or a Fraction into a Fraction.

    Floats are rejected because they are almost never what the caller meant
    when an exact value is required.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"expected a rational literal, got {type(value).__name__}")


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def inv(q: Fraction) -> Fraction:
    if q == 0:
        raise ZeroDivisionError("inverse of zero")
    return 1 / Fraction(q)

"""
Rational Codec

Exact rationals travel through JSON and YAML as "p/q" strings in lowest
terms; integers and plain decimal strings are accepted on input. Floats are
refused so that no exact quantity is silently rounded.
"""

from fractions import Fraction
from typing import Any, List, Sequence

from menuforge.core.exceptions import ParseError
from menuforge.geometry.rational import Vector, format_rational


def encode(q: Fraction) -> str:
    return format_rational(q)


def encode_vector(v: Sequence[Fraction]) -> List[str]:
    return [format_rational(x) for x in v]


def encode_matrix(rows: Sequence[Sequence[Fraction]]) -> List[List[str]]:
    return [encode_vector(row) for row in rows]


def parse(value: Any) -> Fraction:
    """Exact inverse of encode; also takes ints and decimal/fraction strings"""
    if isinstance(value, bool):
        raise ParseError(f"Expected a rational, got boolean {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"Not a rational: {value!r}") from e
    raise ParseError(f"Expected a rational as int or 'p/q' string, got {type(value).__name__} {value!r}")


def parse_vector(values: Any) -> Vector:
    if not isinstance(values, (list, tuple)):
        raise ParseError(f"Expected a list of rationals, got {type(values).__name__}")
    return tuple(parse(v) for v in values)


def parse_matrix(rows: Any) -> List[Vector]:
    if not isinstance(rows, (list, tuple)) or not rows:
        raise ParseError("Expected a nonempty list of rows")
    return [parse_vector(row) for row in rows]

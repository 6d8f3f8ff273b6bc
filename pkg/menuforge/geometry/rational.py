"""
Exact scalars and coordinate vectors

Rationals are fractions.Fraction (always lowest terms, positive denominator);
vectors are tuples of Fractions so they hash and compare exactly.
"""

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Tuple, Union

from menuforge.core.exceptions import InputError


Rational = Fraction
Vector = Tuple[Fraction, ...]
RationalLike = Union[int, Fraction, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rational(value: RationalLike) -> Fraction:
    """Convert an int, Fraction or "p/q" string to an exact Fraction (floats are rejected)"""
    if isinstance(value, bool):
        raise InputError(f"Boolean is not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"Not a rational literal: {value!r}") from e
    raise InputError(f"Unsupported rational value {value!r} of type {type(value).__name__}")


def as_vector(values: Iterable[RationalLike]) -> Vector:
    return tuple(to_rational(v) for v in values)


def zeros(dim: int) -> Vector:
    return (ZERO,) * dim


def unit(dim: int, index: int) -> Vector:
    return tuple(ONE if k == index else ZERO for k in range(dim))


def check_dim(vector: Sequence, dim: int, what: str = "vector") -> None:
    if len(vector) != dim:
        raise InputError(f"{what} has dimension {len(vector)}, expected {dim}")


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    if len(a) != len(b):
        raise InputError(f"Dimension mismatch in dot product: {len(a)} vs {len(b)}")
    total = ZERO
    for x, y in zip(a, b):
        if x and y:
            total += x * y
    return total


def add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def scale(c: Fraction, a: Vector) -> Vector:
    return tuple(c * x for x in a)


def neg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def l1_norm(a: Vector) -> Fraction:
    return sum((abs(x) for x in a), ZERO)


def is_distribution(v: Sequence[Fraction]) -> bool:
    return len(v) > 0 and all(x >= 0 for x in v) and sum(v, ZERO) == ONE


def require_distribution(v: Sequence[Fraction], what: str = "distribution") -> Vector:
    vec = as_vector(v)
    if not is_distribution(vec):
        raise InputError(f"{what} must be nonnegative and sum to exactly 1, got {format_vector(vec)}")
    return vec


def normalize(v: Vector) -> Vector:
    total = sum(v, ZERO)
    if total == 0:
        raise InputError("Cannot normalize a vector with zero sum")
    return tuple(x / total for x in v)


def rationalize(value: float, denominator: int) -> Fraction:
    """Round a float onto the grid 1/denominator"""
    return Fraction(round(value * denominator), denominator)


def format_rational(q: Fraction) -> str:
    """Canonical "p/q" text (lowest terms, also for integers)"""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def format_vector(v: Sequence[Fraction]) -> str:
    return "(" + ", ".join(str(Fraction(x)) for x in v) + ")"

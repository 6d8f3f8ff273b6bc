"""
Exact linear algebra on sympy matrices

Fractions cross into sympy Rationals at this boundary and come back as
Fractions, so callers never see sympy types.
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy as sp

from menuforge.geometry.rational import Vector, ZERO, ONE


def _rational(value) -> sp.Rational:
    q = Fraction(value)
    return sp.Rational(q.numerator, q.denominator)


def _fraction(value: sp.Expr) -> Fraction:
    q = sp.Rational(value)
    return Fraction(int(q.p), int(q.q))


def to_matrix(rows: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> sp.Matrix:
    if not rows:
        return sp.zeros(0, ncols or 0)
    return sp.Matrix([[_rational(v) for v in row] for row in rows])


def to_vector(column: sp.Matrix) -> Vector:
    return tuple(_fraction(v) for v in column)


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    return to_matrix(rows).rank()


def solve_affine(
    A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], ncols: int
) -> Optional[Tuple[Vector, List[Vector]]]:
    """
    General solution of A x = b as x = particular + span(basis)

    Returns None when the system is inconsistent.
    """
    if not A:
        identity = [tuple(ONE if k == j else ZERO for k in range(ncols)) for j in range(ncols)]
        return (ZERO,) * ncols, identity

    M = to_matrix(A)
    rhs = sp.Matrix([_rational(v) for v in b])
    try:
        solution, params = M.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    particular = solution.xreplace({p: 0 for p in params})
    return to_vector(particular), [to_vector(v) for v in M.nullspace()]

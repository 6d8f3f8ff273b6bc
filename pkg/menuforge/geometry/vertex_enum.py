"""
Vertex Enumeration (double description) and Fourier-Motzkin elimination

Equalities are removed first by parametrising their solution set; the
remaining inequalities go to cddlib in exact fraction mode, whose generators
are the vertices (and, for unbounded regions, rays or lines).
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import cdd

from menuforge.core.config import settings
from menuforge.core.exceptions import DimensionLimitError, EmptyPolytopeError, InputError, UnboundedRegionError
from menuforge.geometry.linalg import rank, solve_affine
from menuforge.geometry.lp import find_feasible_point
from menuforge.geometry.models import HalfspaceSystem, Polytope
from menuforge.geometry.rational import Vector, dot, ZERO

NUMBER_TYPE = "fraction"

logger = logging.getLogger(__name__)


# ============================================================================
# DOUBLE DESCRIPTION
# ============================================================================

def _generators(rows: List[Tuple[Vector, Fraction]]) -> List[Vector]:
    """
    Vertices of {z : normal . z <= offset}; cdd reads each row [b | -A] as
    b - A z >= 0 and returns generator rows [1 | v] for vertices, [0 | r] for rays
    """
    H = cdd.Matrix([[offset] + [-a for a in normal] for normal, offset in rows], number_type=NUMBER_TYPE)
    H.rep_type = cdd.RepType.INEQUALITY
    V = cdd.Polyhedron(H).get_generators()
    if V.lin_set:
        raise UnboundedRegionError("Region contains a line")

    vertices = []
    for i in range(V.row_size):
        row = [Fraction(v) for v in V[i]]
        if row[0] == 0:
            raise UnboundedRegionError("Region has a recession direction")
        vertices.append(tuple(v / row[0] for v in row[1:]))
    return vertices


def _check_dimension(dim: int) -> None:
    if dim > settings.MAX_VERTEX_DIM:
        raise DimensionLimitError(
            f"Vertex enumeration is limited to dimension {settings.MAX_VERTEX_DIM}, got {dim}"
        )


def enumerate_vertices(system: HalfspaceSystem) -> Polytope:
    """
    Complete, duplicate-free vertex list of a bounded nonempty polyhedron

    Raises EmptyPolytopeError when infeasible and UnboundedRegionError when
    the region has a recession direction.
    """
    _check_dimension(system.dim)
    if find_feasible_point(system) is None:
        raise EmptyPolytopeError("Halfspace system is infeasible")

    affine = solve_affine([a for a, _ in system.equalities], [b for _, b in system.equalities], system.dim)
    if affine is None:
        raise EmptyPolytopeError("Equality constraints are inconsistent")
    origin, basis = affine
    k = len(basis)

    def lift(z: Sequence[Fraction]) -> Vector:
        point = list(origin)
        for coeff, direction in zip(z, basis):
            if coeff:
                for c in range(system.dim):
                    if direction[c]:
                        point[c] += coeff * direction[c]
        return tuple(point)

    if k == 0:
        return Polytope(dim=system.dim, vertices=(tuple(origin),), halfspaces=system)

    # Inequalities in the parameter space z
    reduced: List[Tuple[Vector, Fraction]] = []
    for a, b in system.rows:
        normal = tuple(dot(a, direction) for direction in basis)
        offset = b - dot(a, origin)
        if any(normal):
            reduced.append((normal, offset))
    if not reduced or rank([n for n, _ in reduced]) < k:
        raise UnboundedRegionError("Region is unbounded along the null space of its constraints")

    vertices = list(dict.fromkeys(lift(z) for z in _generators(reduced)))
    logger.debug(f"Enumerated {len(vertices)} vertices in dimension {system.dim}")
    return Polytope(dim=system.dim, vertices=tuple(vertices), halfspaces=system)


# ============================================================================
# FOURIER-MOTZKIN
# ============================================================================

def eliminate_variable(system: HalfspaceSystem, index: int) -> HalfspaceSystem:
    """
    Project out coordinate ``index``

    An equality mentioning the variable is used for substitution; otherwise
    every (positive, negative) coefficient pair of inequalities is combined.
    """
    if not 0 <= index < system.dim or system.dim < 2:
        raise InputError(f"Cannot eliminate coordinate {index} from a {system.dim}-dimensional system")

    def drop(a: Sequence[Fraction]) -> Vector:
        return tuple(v for c, v in enumerate(a) if c != index)

    pivot = next(((a, b) for a, b in system.equalities if a[index] != 0), None)
    if pivot is not None:
        pa, pb = pivot

        def substitute(a: Vector, b: Fraction) -> Tuple[Vector, Fraction]:
            f = a[index] / pa[index]
            return drop(tuple(x - f * y for x, y in zip(a, pa))), b - f * pb

        rows = tuple(substitute(a, b) for a, b in system.rows)
        equalities = tuple(substitute(a, b) for a, b in system.equalities if (a, b) != pivot)
        return HalfspaceSystem(system.dim - 1, rows, equalities)

    positive = [(a, b) for a, b in system.rows if a[index] > 0]
    negative = [(a, b) for a, b in system.rows if a[index] < 0]
    rows = [(drop(a), b) for a, b in system.rows if a[index] == 0]
    for ap, bp in positive:
        for an, bn in negative:
            wp, wn = -an[index], ap[index]
            combined = tuple(wp * x + wn * y for x, y in zip(ap, an))
            rows.append((drop(combined), wp * bp + wn * bn))
    equalities = tuple((drop(a), b) for a, b in system.equalities)
    return HalfspaceSystem(system.dim - 1, tuple(_dedup_rows(rows)), equalities)


def _dedup_rows(rows: List[Tuple[Vector, Fraction]]) -> List[Tuple[Vector, Fraction]]:
    seen: Dict[Tuple, None] = {}
    for a, b in rows:
        scale = max((abs(v) for v in a), default=ZERO)
        if scale == 0:
            if b < 0:
                seen[(a, b)] = None
            continue
        seen[(tuple(v / scale for v in a), b / scale)] = None
    return list(seen)


def variable_interval(system: HalfspaceSystem, index: int, others: Sequence[Fraction]) -> Tuple[Optional[Fraction], Optional[Fraction]]:
    """
    Feasible range of coordinate ``index`` with every other coordinate fixed

    Returns (low, high); None stands for an infinite bound. Equalities pin the
    value when they mention the variable.
    """
    def full(value: Fraction) -> List[Fraction]:
        values = list(others)
        values.insert(index, value)
        return values

    low: Optional[Fraction] = None
    high: Optional[Fraction] = None
    for a, b in system.equalities:
        if a[index] != 0:
            rest = dot(a, full(ZERO))
            value = (b - rest) / a[index]
            return value, value
    for a, b in system.rows:
        coeff = a[index]
        if coeff == 0:
            continue
        bound = (b - dot(a, full(ZERO))) / coeff
        if coeff > 0:
            high = bound if high is None else min(high, bound)
        else:
            low = bound if low is None else max(low, bound)
    return low, high

"""
Polytope operations on exact vertex / halfspace representations
"""

import logging
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from menuforge.core.exceptions import EmptyPolytopeError, InputError
from menuforge.geometry.lp import Sense, find_feasible_point, solve_lp
from menuforge.geometry.models import HalfspaceSystem, Polytope
from menuforge.geometry.rational import Vector, as_vector, dot, neg, unit, ZERO, ONE


logger = logging.getLogger(__name__)


def _dedup(points: Iterable[Vector]) -> List[Vector]:
    return list(dict.fromkeys(points))


def in_hull(point: Vector, generators: Sequence[Vector]) -> bool:
    """Convex-combination feasibility LP: exists lambda >= 0, sum 1, with sum lambda_v v = point"""
    if not generators:
        return False
    if point in generators:
        return True
    k, dim = len(generators), len(point)
    rows = tuple((neg(unit(k, i)), ZERO) for i in range(k))
    equalities = [(tuple(v[c] for v in generators), point[c]) for c in range(dim)]
    equalities.append(((ONE,) * k, ONE))
    system = HalfspaceSystem(dim=k, rows=rows, equalities=tuple(equalities))
    return find_feasible_point(system) is not None


def convex_hull(points: Iterable[Sequence]) -> Polytope:
    """
    Vertex representation of the convex hull of finitely many points

    A point is dropped when it lies in the hull of the points still kept,
    which leaves exactly the extreme points.
    """
    pts = _dedup(as_vector(p) for p in points)
    if not pts:
        raise InputError("convex_hull needs at least one point")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise InputError("convex_hull points have mixed dimensions")

    kept = list(pts)
    for p in pts:
        others = [q for q in kept if q != p]
        if others and in_hull(p, others):
            kept = others
    logger.debug(f"Hull of {len(pts)} points has {len(kept)} vertices")
    return Polytope(dim=dim, vertices=tuple(kept))


def vertices_of(polytope: Polytope) -> Tuple[Vector, ...]:
    if polytope.vertices is not None:
        return polytope.vertices
    from menuforge.geometry.vertex_enum import enumerate_vertices

    try:
        return enumerate_vertices(polytope.halfspaces).vertices
    except EmptyPolytopeError:
        return ()


def contains_point(polytope: Polytope, point: Sequence) -> bool:
    """Exact membership; halfspace check when available, else the convex-combination LP"""
    p = as_vector(point)
    if len(p) != polytope.dim:
        raise InputError(f"Point has dimension {len(p)}, polytope dimension is {polytope.dim}")
    if polytope.halfspaces is not None:
        return polytope.halfspaces.satisfied_by(p)
    return in_hull(p, polytope.vertices)


def contains_polytope(outer: Polytope, inner: Polytope) -> bool:
    """inner is a subset of outer (vertex-wise)"""
    if outer.dim != inner.dim:
        raise InputError("Polytopes of different dimension")
    return all(contains_point(outer, v) for v in vertices_of(inner))


def polytopes_equal(P: Polytope, Q: Polytope) -> bool:
    if P.dim != Q.dim:
        raise InputError(f"Cannot compare polytopes of dimension {P.dim} and {Q.dim}")
    return contains_polytope(P, Q) and contains_polytope(Q, P)


def maximize_with_tiebreak(
    polytope: Polytope,
    primary: Sequence,
    secondary: Optional[Sequence] = None,
) -> Tuple[Fraction, Fraction, Vector]:
    """
    Lexicographic maximum: primary first, secondary among the primary-optimal face

    Scans vertices when present; otherwise solves two LPs, the second
    restricted to the primary-optimal face.
    """
    c1 = as_vector(primary)
    c2 = as_vector(secondary) if secondary is not None else (ZERO,) * polytope.dim
    if len(c1) != polytope.dim or len(c2) != polytope.dim:
        raise InputError("Objective dimension differs from polytope dimension")

    if polytope.vertices is not None:
        if not polytope.vertices:
            raise EmptyPolytopeError("Cannot maximize over an empty polytope")
        best = None
        for v in polytope.vertices:
            key = (dot(c1, v), dot(c2, v))
            if best is None or key > best[0]:
                best = (key, v)
        (v1, v2), point = best
        return v1, v2, point

    system = polytope.halfspaces
    first = solve_lp(c1, system, Sense.MAX)
    if not first.optimal:
        raise EmptyPolytopeError(f"Primary objective LP is {first.status.value}")
    face = system.with_equalities([(c1, first.value)])
    second = solve_lp(c2, face, Sense.MAX)
    return first.value, second.value, second.point

"""Exact geometry: rationals, LP, polytopes, vertex enumeration, Hausdorff diagnostics"""

from .rational import (
    Rational,
    Vector,
    ZERO,
    ONE,
    to_rational,
    as_vector,
    dot,
    is_distribution,
    format_rational,
)
from .models import HalfspaceSystem, Polytope
from .lp import LPStatus, LPResult, Sense, solve_lp, find_feasible_point
from .polytope import (
    convex_hull,
    contains_point,
    contains_polytope,
    polytopes_equal,
    maximize_with_tiebreak,
    vertices_of,
    in_hull,
)
from .vertex_enum import enumerate_vertices, eliminate_variable, variable_interval
from .hausdorff import hausdorff_distance, directed_distance, point_distance, project_onto_hull

__all__ = [
    "Rational",
    "Vector",
    "ZERO",
    "ONE",
    "to_rational",
    "as_vector",
    "dot",
    "is_distribution",
    "format_rational",
    "HalfspaceSystem",
    "Polytope",
    "LPStatus",
    "LPResult",
    "Sense",
    "solve_lp",
    "find_feasible_point",
    "convex_hull",
    "contains_point",
    "contains_polytope",
    "polytopes_equal",
    "maximize_with_tiebreak",
    "vertices_of",
    "in_hull",
    "enumerate_vertices",
    "eliminate_variable",
    "variable_interval",
    "hausdorff_distance",
    "directed_distance",
    "point_distance",
    "project_onto_hull",
]

"""
Unit tests for exact geometry: rationals, LP, vertex enumeration, hulls, distances
"""

from fractions import Fraction as F

import pytest

from menuforge.core.exceptions import DimensionLimitError, EmptyPolytopeError, InputError, UnboundedRegionError
from menuforge.geometry.hausdorff import directed_distance, hausdorff_distance, point_distance
from menuforge.geometry.linalg import rank, solve_affine
from menuforge.geometry.lp import LPStatus, Sense, find_feasible_point, solve_lp
from menuforge.geometry.models import HalfspaceSystem, Polytope
from menuforge.geometry.polytope import (
    contains_point,
    contains_polytope,
    convex_hull,
    in_hull,
    maximize_with_tiebreak,
    polytopes_equal,
)
from menuforge.geometry.rational import format_rational, rationalize, to_rational
from menuforge.geometry.vertex_enum import eliminate_variable, enumerate_vertices, variable_interval


def _get_unit_square() -> HalfspaceSystem:
    """0 <= x, y <= 1"""
    return HalfspaceSystem(
        dim=2,
        rows=(
            ((-1, 0), 0),
            ((0, -1), 0),
            ((1, 0), 1),
            ((0, 1), 1),
        ),
    )


SQUARE_VERTICES = {(F(0), F(0)), (F(1), F(0)), (F(0), F(1)), (F(1), F(1))}


class TestRational:
    """Test suite for exact rational helpers"""

    @pytest.mark.parametrize(
        "value,expected",
        [
            (F(2, 4), "1/2"),
            (F(-3, 9), "-1/3"),
            (3, "3/1"),
            (F(0), "0/1"),
        ],
    )
    def test_format_rational_lowest_terms(self, value, expected):
        """Test canonical p/q text"""
        assert format_rational(value) == expected

    def test_to_rational_parses_strings(self):
        """Test string and integer literals"""
        assert to_rational("1/3") == F(1, 3)
        assert to_rational(" -2/4 ") == F(-1, 2)
        assert to_rational(5) == F(5)

    @pytest.mark.parametrize("value", [0.5, True, None, "one half", "1/0"])
    def test_to_rational_rejects(self, value):
        """Test floats, booleans and junk are refused"""
        with pytest.raises(InputError):
            to_rational(value)

    def test_rationalize_rounds_to_grid(self):
        """Test floats are rounded onto 1/denominator"""
        assert rationalize(0.33349, 1000) == F(333, 1000)
        assert rationalize(0.5, 10) == F(1, 2)


class TestLinearProgram:
    """Test suite for the exact simplex"""

    def test_optimal_vertex(self):
        """Test max x + y over the unit square"""
        # Act
        result = solve_lp((1, 1), _get_unit_square(), Sense.MAX)

        # Assert
        assert result.status == LPStatus.OPTIMAL
        assert result.value == 2
        assert result.point == (F(1), F(1))

    def test_minimize(self):
        """Test min x - y over the unit square"""
        result = solve_lp((1, -1), _get_unit_square(), Sense.MIN)

        assert result.value == -1
        assert result.point == (F(0), F(1))

    def test_equality_and_free_variables(self):
        """Test free variables with an equality: max x s.t. x + y = 1, y >= 1/3, x <= 5"""
        system = HalfspaceSystem(dim=2, rows=(((0, -1), F(-1, 3)), ((1, 0), 5)), equalities=(((1, 1), 1),))

        result = solve_lp((1, 0), system)

        assert result.value == F(2, 3)
        assert result.point == (F(2, 3), F(1, 3))

    def test_infeasible(self):
        """Test x <= -1 with x >= 0"""
        system = HalfspaceSystem(dim=1, rows=(((-1,), 0), ((1,), -1)))

        result = solve_lp((1,), system)

        assert result.status == LPStatus.INFEASIBLE
        assert not result.optimal
        assert find_feasible_point(system) is None

    def test_unbounded(self):
        """Test max x with only x >= 0"""
        system = HalfspaceSystem(dim=1, rows=(((-1,), 0),))

        assert solve_lp((1,), system).status == LPStatus.UNBOUNDED

    def test_redundant_equalities(self):
        """Test duplicated equality rows are tolerated"""
        system = HalfspaceSystem.simplex(3).with_equalities([((1, 1, 1), 1), ((2, 2, 2), 2)])

        result = solve_lp((0, 1, 0), system)

        assert result.value == 1

    def test_objective_dimension_mismatch(self):
        with pytest.raises(InputError):
            solve_lp((1, 2, 3), _get_unit_square())


class TestExactLinearAlgebra:
    """Test suite for rank and affine solves"""

    def test_rank_of_dependent_rows(self):
        rows = [(F(1), F(2), F(3)), (F(2), F(4), F(6)), (F(0), F(1, 3), F(1))]

        assert rank(rows) == 2
        assert rank([]) == 0

    def test_solve_affine(self):
        # Arrange
        A = [(F(1), F(1), F(1))]
        b = [F(1)]

        # Act
        particular, basis = solve_affine(A, b, 3)

        # Assert
        assert all(isinstance(v, F) for v in particular)
        assert sum(particular) == 1
        assert len(basis) == 2
        assert all(sum(v) == 0 for v in basis)

    def test_solve_affine_inconsistent(self):
        A = [(F(1), F(1)), (F(2), F(2))]

        assert solve_affine(A, [F(1), F(3)], 2) is None

    def test_solve_affine_without_equations(self):
        particular, basis = solve_affine([], [], 2)

        assert particular == (F(0), F(0))
        assert basis == [(F(1), F(0)), (F(0), F(1))]


class TestVertexEnumeration:
    """Test suite for double description and Fourier-Motzkin"""

    def test_square(self):
        """Test the four corners of the unit square"""
        polytope = enumerate_vertices(_get_unit_square())

        assert set(polytope.vertices) == SQUARE_VERTICES

    def test_simplex(self):
        """Test the simplex has the unit vectors as vertices"""
        polytope = enumerate_vertices(HalfspaceSystem.simplex(4))

        expected = {tuple(F(int(k == c)) for c in range(4)) for k in range(4)}
        assert set(polytope.vertices) == expected

    def test_redundant_row_is_ignored(self):
        """Test x + y <= 5 does not change the square"""
        system = _get_unit_square().with_rows([((1, 1), 5)])

        assert set(enumerate_vertices(system).vertices) == SQUARE_VERTICES

    def test_cut_square(self):
        """Test x + y <= 3/2 cuts the top corner into two vertices"""
        system = _get_unit_square().with_rows([((1, 1), F(3, 2))])

        vertices = set(enumerate_vertices(system).vertices)

        assert vertices == {(F(0), F(0)), (F(1), F(0)), (F(0), F(1)), (F(1), F(1, 2)), (F(1, 2), F(1))}

    def test_single_point(self):
        """Test a system pinned by equalities"""
        system = HalfspaceSystem(dim=2, equalities=(((1, 0), F(1, 3)), ((0, 1), F(2, 3))))

        assert enumerate_vertices(system).vertices == ((F(1, 3), F(2, 3)),)

    def test_degenerate_apex(self):
        """Test a square pyramid whose apex lies on four facets"""
        # Arrange
        rows = [((0, 0, -1), 0)]
        for a, b in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            rows.append(((a, b, 1), 1))
        system = HalfspaceSystem(dim=3, rows=tuple(rows))

        # Act
        vertices = set(enumerate_vertices(system).vertices)

        # Assert
        base = {(F(a), F(b), F(0)) for a in (-1, 1) for b in (-1, 1)}
        assert vertices == base | {(F(0), F(0), F(1))}

    def test_unbounded_raises(self):
        system = HalfspaceSystem(dim=2, rows=(((-1, 0), 0), ((0, -1), 0)))

        with pytest.raises(UnboundedRegionError):
            enumerate_vertices(system)

    def test_infeasible_raises(self):
        system = HalfspaceSystem.simplex(2).with_rows([((1, 1), F(1, 2))])

        with pytest.raises(EmptyPolytopeError):
            enumerate_vertices(system)

    def test_dimension_limit(self):
        """Test enumeration refuses dimensions above the configured limit"""
        with pytest.raises(DimensionLimitError):
            enumerate_vertices(HalfspaceSystem.simplex(17))

    def test_eliminate_variable_projects(self):
        """Test projecting y out of the cut square leaves 0 <= x <= 1"""
        system = _get_unit_square().with_rows([((1, 1), F(3, 2))])

        projected = eliminate_variable(system, 1)

        assert projected.dim == 1
        assert projected.satisfied_by((F(1),))
        assert projected.satisfied_by((F(0),))
        assert not projected.satisfied_by((F(3, 2),))
        assert not projected.satisfied_by((F(-1, 10),))

    def test_eliminate_variable_uses_equalities(self):
        """Test substitution through x + y = 1 on the simplex"""
        projected = eliminate_variable(HalfspaceSystem.simplex(2), 1)

        assert projected.satisfied_by((F(1, 2),))
        assert not projected.satisfied_by((F(2),))

    def test_variable_interval(self):
        """Test the feasible range of y with x fixed"""
        system = _get_unit_square().with_rows([((1, 1), F(3, 2))])

        assert variable_interval(system, 1, [F(1)]) == (F(0), F(1, 2))
        assert variable_interval(system, 1, [F(0)]) == (F(0), F(1))


class TestPolytopeOperations:
    """Test suite for hulls, membership and lexicographic maximization"""

    def test_convex_hull_drops_interior_points(self):
        """Test the centre and an edge midpoint are not vertices"""
        points = list(SQUARE_VERTICES) + [(F(1, 2), F(1, 2)), (F(1, 2), F(0))]

        hull = convex_hull(points)

        assert set(hull.vertices) == SQUARE_VERTICES

    def test_convex_hull_rejects_mixed_dimensions(self):
        with pytest.raises(InputError):
            convex_hull([(0, 1), (0, 1, 2)])

    def test_in_hull(self):
        generators = [(F(0), F(0)), (F(1), F(0)), (F(0), F(1))]

        assert in_hull((F(1, 3), F(1, 3)), generators)
        assert not in_hull((F(2, 3), F(2, 3)), generators)

    def test_membership_both_representations(self):
        """Test halfspace and vertex membership agree"""
        by_rows = Polytope(dim=2, halfspaces=_get_unit_square())
        by_vertices = Polytope(dim=2, vertices=tuple(SQUARE_VERTICES))

        for point, expected in [((F(1, 2), F(1)), True), ((F(1), F(11, 10)), False)]:
            assert contains_point(by_rows, point) is expected
            assert contains_point(by_vertices, point) is expected
            assert (point in by_vertices) is expected

    def test_equality_and_containment(self):
        square = enumerate_vertices(_get_unit_square())
        triangle = convex_hull([(0, 0), (1, 0), (0, 1)])

        assert polytopes_equal(square, Polytope(dim=2, vertices=tuple(SQUARE_VERTICES)))
        assert contains_polytope(square, triangle)
        assert not contains_polytope(triangle, square)
        assert not polytopes_equal(square, triangle)

    @pytest.mark.parametrize("use_vertices", [True, False])
    def test_maximize_with_tiebreak(self, use_vertices):
        """Test the secondary objective breaks ties on the primary-optimal face"""
        polytope = (
            Polytope(dim=2, vertices=tuple(SQUARE_VERTICES))
            if use_vertices
            else Polytope(dim=2, halfspaces=_get_unit_square())
        )

        primary, secondary, point = maximize_with_tiebreak(polytope, (1, 0), (0, -1))

        assert primary == 1
        assert secondary == 0
        assert point == (F(1), F(0))


class TestHausdorff:
    """Test suite for float distance diagnostics"""

    def test_point_distance(self):
        square = Polytope(dim=2, vertices=tuple(SQUARE_VERTICES))

        assert point_distance((2.0, 0.5), square) == pytest.approx(1.0, abs=1e-6)
        assert point_distance((0.5, 0.5), square) == pytest.approx(0.0, abs=1e-4)

    def test_shifted_segments(self):
        """Test two parallel unit segments at distance 1"""
        low = convex_hull([(0, 0), (1, 0)])
        high = convex_hull([(0, 1), (1, 1)])

        assert hausdorff_distance(low, high) == pytest.approx(1.0, abs=1e-6)
        assert hausdorff_distance(low, low) == pytest.approx(0.0, abs=1e-9)

    def test_directed_distance_is_one_sided(self):
        """Test a sub-triangle is at distance 0 from the square but not conversely"""
        square = Polytope(dim=2, vertices=tuple(SQUARE_VERTICES))
        triangle = convex_hull([(0, 0), (1, 0), (0, 1)])

        assert directed_distance(triangle.vertices, square) == pytest.approx(0.0, abs=1e-6)
        assert directed_distance(square.vertices, triangle) == pytest.approx(2 ** -0.5, abs=1e-6)

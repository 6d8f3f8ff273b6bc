"""
Menu Service

Builds the no-regret and no-swap-regret menus as exact polytopes, computes
their value faces, checks validity on a grid of optimizer mixes and performs
menu surgery (extension, fixed-action menus, vertex removal).

CRITICAL RESPONSIBILITIES:
1. Every menu vertex is an exact CSP of the game
2. Containment and equality are decided on vertex sets with exact LPs
3. Validity checks are resolution-parameterized: a failure is a certificate, a pass is not
"""

import itertools
import logging
from fractions import Fraction
from functools import partial
from typing import Iterable, List, Optional, Sequence

from menuforge.core.exceptions import InputError, PreconditionError
from menuforge.core.parallel import parallel_map
from menuforge.domain.games.v1 import CSPLike, Game
from menuforge.domain.menus.v1 import CheckReport, Menu, ValueFaces
from menuforge.geometry.lp import find_feasible_point
from menuforge.geometry.models import HalfspaceSystem, Polytope
from menuforge.geometry.polytope import contains_point, convex_hull, maximize_with_tiebreak, polytopes_equal
from menuforge.geometry.rational import Vector, ZERO, ONE, as_vector, dot, neg, unit
from menuforge.geometry.vertex_enum import enumerate_vertices
from menuforge.services.game_model import best_responses, coerce_csp, learner_payoffs, outer, pure_csp, regret


logger = logging.getLogger(__name__)


def _menu_from_system(game: Game, system: HalfspaceSystem, label: str) -> Menu:
    polytope = enumerate_vertices(system)
    logger.info(
        f"Built {label}",
        extra={"m": game.m, "n": game.n, "vertices": len(polytope.vertices), "menu": label},
    )
    return Menu(polytope=polytope, game=game, label=label)


# ============================================================================
# CONSTRAINT SYSTEMS
# ============================================================================

def nr_system(game: Game) -> HalfspaceSystem:
    """Delta_mn plus, for every deviation j*, sum phi_ij (u_L(i, j*) - u_L(i, j)) <= 0"""
    rows = []
    for target in range(game.n):
        rows.append(
            (
                tuple(game.u_L[i][target] - game.u_L[i][j] for i in range(game.m) for j in range(game.n)),
                ZERO,
            )
        )
    return HalfspaceSystem.simplex(game.dim).with_rows(rows)


def nsr_system(game: Game) -> HalfspaceSystem:
    """Delta_mn plus one swap constraint per (played action j, deviation j*)"""
    rows = []
    for j in range(game.n):
        for target in range(game.n):
            if target == j:
                continue
            normal = [ZERO] * game.dim
            for i in range(game.m):
                normal[game.index(i, j)] = game.u_L[i][target] - game.u_L[i][j]
            rows.append((tuple(normal), ZERO))
    return HalfspaceSystem.simplex(game.dim).with_rows(rows)


# ============================================================================
# NAMED MENUS
# ============================================================================

def build_nr_menu(game: Game) -> Menu:
    return _menu_from_system(game, nr_system(game), "M_NR")


def build_nsr_menu(game: Game) -> Menu:
    return _menu_from_system(game, nsr_system(game), "M_NSR")


def fixed_action_menu(game: Game, j: int) -> Menu:
    """Menu of the learner that always plays j: conv{i (x) j : i in [m]}"""
    if not 0 <= j < game.n:
        raise InputError(f"Learner action {j} out of range for n={game.n}")
    vertices = tuple(pure_csp(game, i, j) for i in range(game.m))
    return Menu(
        polytope=Polytope(dim=game.dim, vertices=vertices),
        game=game,
        label=f"fixed:{game.learner_label(j)}",
    )


def menu_from_points(game: Game, points: Iterable[CSPLike], label: str) -> Menu:
    vertices = [coerce_csp(game, p) for p in points]
    return Menu(polytope=convex_hull(vertices), game=game, label=label)


# ============================================================================
# VALUE FACES
# ============================================================================

def learner_values(menu: Menu) -> List[Fraction]:
    flat = menu.game.flat_u_L
    return [dot(flat, v) for v in menu.vertices]


def value_faces(menu: Menu) -> ValueFaces:
    """U+/U- over the vertices and the faces (hulls of the attaining vertices)"""
    values = learner_values(menu)
    top, bottom = max(values), min(values)
    plus = tuple(v for v, u in zip(menu.vertices, values) if u == top)
    minus = tuple(v for v, u in zip(menu.vertices, values) if u == bottom)
    return ValueFaces(
        u_plus=top,
        u_minus=bottom,
        m_plus=Polytope(dim=menu.polytope.dim, vertices=plus),
        m_minus=Polytope(dim=menu.polytope.dim, vertices=minus),
    )


def learner_value(menu: Menu, uO: Sequence) -> Fraction:
    """V_L(M, uO): learner payoff at the optimizer's best CSP, ties broken for the learner"""
    _, value, _ = maximize_with_tiebreak(menu.polytope, as_vector(uO), menu.game.flat_u_L)
    return value


def optimizer_value(menu: Menu, uO: Sequence) -> Fraction:
    value, _, _ = maximize_with_tiebreak(menu.polytope, as_vector(uO), menu.game.flat_u_L)
    return value


# ============================================================================
# VALIDITY
# ============================================================================

def simplex_grid(dim: int, denominator: int) -> List[Vector]:
    """All points of the simplex with coordinates in (1/denominator)Z, lexicographic order"""
    if denominator < 1:
        raise InputError(f"Grid denominator must be positive, got {denominator}")
    points = []
    for bars in itertools.combinations(range(denominator + dim - 1), dim - 1):
        parts, previous = [], -1
        for bar in bars:
            parts.append(bar - previous - 1)
            previous = bar
        parts.append(denominator + dim - 2 - previous)
        points.append(tuple(Fraction(p, denominator) for p in parts))
    return sorted(points, reverse=True)


def response_for(menu: Menu, x: Sequence) -> Optional[Vector]:
    """Some y in Delta_n with x (x) y in the menu, or None"""
    game = menu.game
    x = as_vector(x)
    n = game.n

    def lift(y_part: Sequence[Fraction]) -> Vector:
        return outer(x, y_part)

    if menu.polytope.halfspaces is not None:
        system = menu.polytope.halfspaces
        rows = [(neg(unit(n, j)), ZERO) for j in range(n)]
        for a, b in system.rows:
            rows.append((tuple(dot(a, lift(unit(n, j))) for j in range(n)), b))
        equalities = [((ONE,) * n, ONE)]
        for a, b in system.equalities:
            equalities.append((tuple(dot(a, lift(unit(n, j))) for j in range(n)), b))
        point = find_feasible_point(HalfspaceSystem(n, tuple(rows), tuple(equalities)))
        return point

    # variables (y, lambda): sum lambda_v v = x (x) y
    vertices = menu.vertices
    k = len(vertices)
    dim = n + k
    rows = tuple((neg(unit(dim, c)), ZERO) for c in range(dim))
    equalities = [((ONE,) * n + (ZERO,) * k, ONE), ((ZERO,) * n + (ONE,) * k, ONE)]
    for i in range(game.m):
        for j in range(n):
            coeff_y = tuple(-x[i] if c == j else ZERO for c in range(n))
            coeff_l = tuple(v[game.index(i, j)] for v in vertices)
            equalities.append((coeff_y + coeff_l, ZERO))
    point = find_feasible_point(HalfspaceSystem(dim, rows, tuple(equalities)))
    return None if point is None else point[:n]


def _has_response(menu: Menu, x: Vector) -> bool:
    return response_for(menu, x) is not None


def is_valid_menu(menu: Menu, grid_denominator: int, jobs: Optional[int] = None) -> CheckReport:
    """
    For every x on the grid of Delta_m (vertices included), test whether some
    y makes x (x) y a point of the menu. Reports the first failing x.
    """
    grid = simplex_grid(menu.game.m, grid_denominator)
    answers = parallel_map(partial(_has_response, menu), grid, jobs=jobs)
    failing = next((x for x, ok in zip(grid, answers) if not ok), None)
    report = CheckReport(
        menu_label=menu.label,
        passed=failing is None,
        grid_denominator=grid_denominator,
        points_checked=len(grid),
        failing_x=failing,
    )
    logger.info(
        f"Validity check of {menu.label}: passed={report.passed}",
        extra={"menu": menu.label, "grid_denominator": grid_denominator, "points": len(grid)},
    )
    return report


# ============================================================================
# SURGERY
# ============================================================================

def extend_menu(menu: Menu, extra: Iterable[CSPLike], label: Optional[str] = None) -> Menu:
    points = [coerce_csp(menu.game, p) for p in extra]
    polytope = convex_hull(list(menu.vertices) + points)
    return Menu(polytope=polytope, game=menu.game, label=label or f"{menu.label}+ext")


def drop_min_vertex(menu: Menu, nsr: Menu, phi0: CSPLike) -> Menu:
    """conv(nsr vertices and the menu's vertices other than phi0)"""
    target = coerce_csp(menu.game, phi0)
    if target not in menu.vertices:
        raise PreconditionError("phi0 is not a vertex of the menu")
    faces = value_faces(menu)
    if target not in faces.m_minus.vertices:
        raise PreconditionError("phi0 is not on the menu's minimum-value face")
    nsr_faces = value_faces(nsr)
    if nsr_faces.u_minus == faces.u_minus and contains_point(
        Polytope(dim=nsr.polytope.dim, vertices=nsr_faces.m_minus.vertices), target
    ):
        raise PreconditionError("phi0 lies on the minimum-value face of the no-swap-regret menu")

    points = list(nsr.vertices) + [v for v in menu.vertices if v != target]
    reduced = Menu(polytope=convex_hull(points), game=menu.game, label=f"{menu.label}-drop")
    if polytopes_equal(reduced.polytope, menu.polytope):
        raise PreconditionError("Removing phi0 does not change the menu")
    return reduced


# ============================================================================
# ORACLES
# ============================================================================

def nsr_grid_oracle(game: Game, grid_denominator: int) -> Menu:
    """Hull of x (x) j over grid mixes x and best responses j"""
    groups = {}
    for x in simplex_grid(game.m, grid_denominator):
        for j in best_responses(game, x):
            groups.setdefault(j, []).append(outer(x, unit(game.n, j)))
    points = []
    for j in sorted(groups):
        points.extend(convex_hull(groups[j]).vertices)
    return Menu(polytope=convex_hull(points), game=game, label=f"nsr_grid_{grid_denominator}")


def nr_hull_oracle(game: Game, grid_denominator: int) -> Menu:
    """Hull of zero-regret product CSPs x (x) y with x and y on grids"""
    points = [
        outer(x, y)
        for x in simplex_grid(game.m, grid_denominator)
        for y in simplex_grid(game.n, grid_denominator)
        if regret(game, outer(x, y)) == 0
    ]
    return Menu(polytope=convex_hull(points), game=game, label=f"nr_grid_{grid_denominator}")


def is_product_of_best_response(game: Game, vertex: Vector) -> bool:
    """True when the CSP equals x (x) y with every action in supp(y) a best response to x"""
    x = tuple(sum(vertex[game.index(i, j)] for j in range(game.n)) for i in range(game.m))
    y = tuple(sum(vertex[game.index(i, j)] for i in range(game.m)) for j in range(game.n))
    if outer(x, y) != tuple(vertex):
        return False
    br = best_responses(game, x)
    return all(j in br for j in range(game.n) if y[j] > 0)


def conditional_best_responses(game: Game, vertex: Vector) -> bool:
    """Every learner action in the support is a best response to its conditional optimizer mix"""
    for j in range(game.n):
        column = [vertex[game.index(i, j)] for i in range(game.m)]
        total = sum(column, ZERO)
        if total == 0:
            continue
        payoffs = learner_payoffs(game, column)
        if payoffs[j] != max(payoffs):
            return False
    return True

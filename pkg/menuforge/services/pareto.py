"""
Pareto Service

Decides Pareto-optimality of no-regret menus by comparing minimum-value
faces with the no-swap-regret menu, builds the dominating menu when the
comparison fails, and searches for optimizer payoffs that separate two menus
strictly.
"""

import logging
import math
from fractions import Fraction
from functools import partial
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from menuforge.core.config import settings
from menuforge.core.exceptions import InputError, PreconditionError, SearchFailureError
from menuforge.core.parallel import parallel_map
from menuforge.domain.games.v1 import Game
from menuforge.domain.menus.v1 import (
    DominanceAudit,
    Menu,
    ParetoVerdict,
    SeparationWitness,
    VerdictReason,
)
from menuforge.geometry.lp import Sense, solve_lp
from menuforge.geometry.models import HalfspaceSystem
from menuforge.geometry.polytope import contains_point, contains_polytope, polytopes_equal
from menuforge.geometry.rational import Vector, ZERO, ONE, as_vector, dot, neg, rationalize, scale, sub, unit, add
from menuforge.services.game_model import phi_plus, pure_csp
from menuforge.services.menus import (
    build_nr_menu,
    build_nsr_menu,
    drop_min_vertex,
    fixed_action_menu,
    learner_value,
    value_faces,
)


logger = logging.getLogger(__name__)


# ============================================================================
# VERDICT
# ============================================================================

def check_pareto_optimal(
    menu: Menu,
    game: Optional[Game] = None,
    nr: Optional[Menu] = None,
    nsr: Optional[Menu] = None,
) -> ParetoVerdict:
    """
    Pareto-optimality of a no-regret menu

    The verdict abstains (optimal=False with a non-face reason) when the menu
    is not a no-regret menu containing the no-swap-regret menu and every
    learner-optimal pure pair. Otherwise the menu is optimal exactly when its
    minimum-value face equals that of the no-swap-regret menu; if not, a
    vertex of the larger face is removed to build a dominating menu.

    Args:
        menu: Menu to judge
        game: Game of the menu (defaults to menu.game)
        nr, nsr: Prebuilt no-regret / no-swap-regret menus of the game

    Returns:
        ParetoVerdict
    """
    game = game or menu.game
    if game.dim != menu.polytope.dim:
        raise InputError(f"Menu dimension {menu.polytope.dim} does not match game dimension {game.dim}")
    nr = nr or build_nr_menu(game)
    nsr = nsr or build_nsr_menu(game)

    def abstain(reason: VerdictReason) -> ParetoVerdict:
        logger.info(f"Pareto check of {menu.label} abstains: {reason.value}", extra={"menu": menu.label})
        return ParetoVerdict(menu_label=menu.label, optimal=False, reason=reason)

    if not contains_polytope(nr.polytope, menu.polytope):
        return abstain(VerdictReason.NOT_NO_REGRET)
    pairs, _ = phi_plus(game)
    if any(not contains_point(menu.polytope, pure_csp(game, i, j)) for i, j in pairs):
        return abstain(VerdictReason.MISSING_PHI_PLUS)
    if not contains_polytope(menu.polytope, nsr.polytope):
        return abstain(VerdictReason.NSR_NOT_CONTAINED)

    faces = value_faces(menu)
    nsr_faces = value_faces(nsr)
    if faces.u_minus == nsr_faces.u_minus and polytopes_equal(faces.m_minus, nsr_faces.m_minus):
        logger.info(f"{menu.label} is Pareto-optimal", extra={"menu": menu.label, "game": game.name})
        return ParetoVerdict(menu_label=menu.label, optimal=True, reason=VerdictReason.MIN_FACE_MATCHES_NSR)

    phi0 = next(v for v in faces.m_minus.vertices if not contains_point(nsr_faces.m_minus, v))
    dominating = drop_min_vertex(menu, nsr, phi0)
    logger.info(
        f"{menu.label} is Pareto-dominated",
        extra={"menu": menu.label, "game": game.name, "dominating_vertices": len(dominating.vertices)},
    )
    return ParetoVerdict(
        menu_label=menu.label,
        optimal=False,
        reason=VerdictReason.MIN_FACE_STRICTLY_LARGER,
        witness_vertex=phi0,
        dominating_menu=dominating,
    )


def high_regret_menu(game: Game) -> Menu:
    """Menu of the learner that always plays the learner action of the first learner-optimal pair"""
    pairs, _ = phi_plus(game)
    _, j = pairs[0]
    return fixed_action_menu(game, j)


# ============================================================================
# SEPARATION SEARCH
# ============================================================================

def _targeted_direction(phi: Vector, loser: Sequence[Vector], winner: Sequence[Vector], v1: Vector) -> Optional[Vector]:
    """
    w in [-1, 1]^d making phi the unique w-maximizer of the loser while v1 is
    the unique w-maximizer of the winner; None when no such w exists
    """
    dim = len(phi)
    size = dim + 1
    rows: List[Tuple[Vector, Fraction]] = []
    for c in range(dim):
        rows.append((unit(size, c), ONE))
        rows.append((neg(unit(size, c)), ONE))
    rows.append((unit(size, dim), ONE))
    for v in loser:
        if v != phi:
            rows.append((sub(v, phi) + (ONE,), ZERO))
    for v in winner:
        if v != v1:
            rows.append((sub(v, v1) + (ONE,), ZERO))
    result = solve_lp(unit(size, dim), HalfspaceSystem(dim=size, rows=tuple(rows)), Sense.MAX)
    if result.optimal and result.value > 0:
        return result.point[:dim]
    return None


def _max_margin_direction(phi: Vector, winner: Sequence[Vector]) -> Optional[Vector]:
    """w in [-1, 1]^d maximizing min over winner vertices v of w.(phi - v)"""
    dim = len(phi)
    size = dim + 1
    rows: List[Tuple[Vector, Fraction]] = []
    for c in range(dim):
        rows.append((unit(size, c), ONE))
        rows.append((neg(unit(size, c)), ONE))
    rows.append((unit(size, dim), ONE))
    for v in winner:
        rows.append((sub(v, phi) + (ONE,), ZERO))
    result = solve_lp(unit(size, dim), HalfspaceSystem(dim=size, rows=tuple(rows)), Sense.MAX)
    if result.optimal and result.value > 0:
        return result.point[:dim]
    return None


def circle_parameters(budget: int) -> Iterator[Fraction]:
    """
    Rational t = tan(theta / 2) for theta on successively halved grids of (0, pi),
    starting at theta = pi / 2 (t = 1)
    """
    seen = set()
    level = 1
    while len(seen) < budget:
        steps = 2 ** level
        for k in range(1, steps, 2):
            t = rationalize(math.tan(math.pi * k / (2 * steps)), 1000)
            if t > 0 and t not in seen:
                seen.add(t)
                yield t
                if len(seen) >= budget:
                    return
        level += 1
        if level > 16:
            return


def _circle_point(u_L: Vector, w: Vector, t: Fraction) -> Vector:
    """((1 - t^2) u_L + 2 t w) / (1 + t^2)"""
    norm = ONE + t * t
    return add(scale((ONE - t * t) / norm, u_L), scale(2 * t / norm, w))


def find_separating_uO(
    winner: Menu,
    loser: Menu,
    game: Optional[Game] = None,
    sweep_budget: Optional[int] = None,
) -> SeparationWitness:
    """
    Optimizer payoff u_O with V_L(winner, u_O) > V_L(loser, u_O) exactly

    Both menus must share their maximum-value face and the loser must have a
    vertex outside the winner. Directions are mixed with u_L on rational points
    of the unit circle; the sweep is a bounded search, and exhausting it raises
    SearchFailureError without claiming anything about dominance.
    """
    game = game or winner.game
    budget = sweep_budget or settings.SWEEP_BUDGET
    if winner.polytope.dim != loser.polytope.dim or winner.polytope.dim != game.dim:
        raise InputError("Menus and game have different dimensions")

    if not polytopes_equal(value_faces(winner).m_plus, value_faces(loser).m_plus):
        raise PreconditionError("Menus do not share their maximum-value face")
    outside = [v for v in loser.vertices if not contains_point(winner.polytope, v)]
    if not outside:
        raise PreconditionError(f"Every vertex of {loser.label} lies in {winner.label}")

    u_L = game.flat_u_L
    phi = min(outside, key=lambda v: dot(u_L, v))
    floor = dot(u_L, phi)

    directions: List[Vector] = []
    for v1 in sorted(winner.vertices, key=lambda v: dot(u_L, v), reverse=True):
        if dot(u_L, v1) <= floor:
            break
        w = _targeted_direction(phi, loser.vertices, winner.vertices, v1)
        if w is not None:
            directions.append(w)
            break
    fallback = _max_margin_direction(phi, winner.vertices)
    if fallback is not None:
        directions.append(fallback)

    def attempt(uO: Vector) -> Optional[Tuple[Fraction, Fraction]]:
        won, lost = learner_value(winner, uO), learner_value(loser, uO)
        return (won, lost) if won > lost else None

    for w in directions:
        for mirrored, direction in ((False, w), (True, neg(w))):
            for t in circle_parameters(budget):
                uO = _circle_point(u_L, direction, t)
                gap = attempt(uO)
                if gap is not None:
                    logger.info(
                        f"Separated {winner.label} from {loser.label}",
                        extra={"t": str(t), "mirrored": mirrored, "winner": winner.label, "loser": loser.label},
                    )
                    return SeparationWitness(
                        uO=uO, vL_winner=gap[0], vL_loser=gap[1], direction=direction,
                        circle_parameter=t, mirrored=mirrored, separated_vertex=phi,
                    )

    gap = attempt(neg(u_L))
    if gap is not None:
        return SeparationWitness(
            uO=neg(u_L), vL_winner=gap[0], vL_loser=gap[1],
            direction=directions[0] if directions else neg(u_L), separated_vertex=phi,
        )
    raise SearchFailureError(
        f"No separating optimizer payoff found for {winner.label} vs {loser.label} within {budget} sweep points"
    )


# ============================================================================
# EMPIRICAL AUDIT
# ============================================================================

def sample_directions(dim: int, count: int, seed: int) -> List[Vector]:
    """Rational u_O samples from [-1, 1]^dim with denominator 1000"""
    rng = np.random.default_rng(seed)
    raw = rng.integers(-1000, 1001, size=(count, dim))
    return [tuple(Fraction(int(v), 1000) for v in row) for row in raw]


def _compare(candidate: Menu, baseline: Menu, uO: Vector) -> int:
    won, lost = learner_value(candidate, uO), learner_value(baseline, uO)
    return (won > lost) - (won < lost)


def audit_dominance(
    candidate: Menu,
    baseline: Menu,
    uO_samples: Sequence[Sequence],
    seed: Optional[int] = None,
    jobs: Optional[int] = None,
) -> DominanceAudit:
    """Per-sample comparison of learner values; a dominating construction records zero losses"""
    if candidate.polytope.dim != baseline.polytope.dim:
        raise InputError("Menus have different dimensions")
    samples = [as_vector(u) for u in uO_samples]
    if any(len(u) != candidate.polytope.dim for u in samples):
        raise InputError("u_O sample dimension differs from the menus'")

    outcomes = parallel_map(partial(_compare, candidate, baseline), samples, jobs=jobs)
    first_loss = next((u for u, o in zip(samples, outcomes) if o < 0), None)
    audit = DominanceAudit(
        candidate_label=candidate.label,
        baseline_label=baseline.label,
        samples=len(samples),
        wins=outcomes.count(1),
        ties=outcomes.count(0),
        losses=outcomes.count(-1),
        seed=seed,
        first_loss=first_loss,
    )
    logger.info(
        f"Audit {candidate.label} vs {baseline.label}: {audit.wins}/{audit.ties}/{audit.losses}",
        extra={"samples": audit.samples, "seed": seed},
    )
    return audit

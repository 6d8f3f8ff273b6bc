"""
Game Model Service

Best responses, dominance classes, the zero-sum value and the regret
quantities of correlated strategy profiles, all in exact arithmetic.
"""

import logging
from fractions import Fraction
from typing import Callable, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

from menuforge.core.exceptions import AssumptionViolationError, InputError, LPCertificateError
from menuforge.domain.games.v1 import (
    CSP,
    CSPLike,
    ActionClass,
    ActionReport,
    Game,
    ValidationReport,
)
from menuforge.geometry.lp import Sense, solve_lp
from menuforge.geometry.models import HalfspaceSystem
from menuforge.geometry.rational import (
    Vector,
    ZERO,
    ONE,
    as_vector,
    check_dim,
    neg,
    require_distribution,
    to_rational,
    unit,
)


logger = logging.getLogger(__name__)

# Upper bound on the incentive margin variable; only binds when n == 1
MARGIN_CAP = Fraction(2)


# ============================================================================
# PAYOFF HELPERS
# ============================================================================

def coerce_csp(game: Game, phi: CSPLike) -> Vector:
    """Probability vector of a CSP (or raw sequence), checked against the game"""
    if isinstance(phi, CSP):
        if (phi.m, phi.n) != (game.m, game.n):
            raise InputError(f"CSP is {phi.m}x{phi.n}, game is {game.m}x{game.n}")
        return phi.probs
    return CSP.of(game, phi).probs


def learner_payoffs(game: Game, X: Sequence[Fraction]) -> Vector:
    """u_L(X, j) for every learner action j; X may be any nonnegative optimizer weight vector"""
    check_dim(X, game.m, "optimizer mix")
    return tuple(sum((X[i] * game.u_L[i][j] for i in range(game.m) if X[i]), ZERO) for j in range(game.n))


def argmax_actions(values: Sequence[Fraction]) -> FrozenSet[int]:
    top = max(values)
    return frozenset(j for j, v in enumerate(values) if v == top)


def best_responses(game: Game, x: Sequence) -> FrozenSet[int]:
    """Exact argmax set of learner actions against optimizer mix x"""
    mix = require_distribution(x, "optimizer mix")
    check_dim(mix, game.m, "optimizer mix")
    return argmax_actions(learner_payoffs(game, mix))


def expected_payoff(game: Game, phi: CSPLike, which: str = "L") -> Fraction:
    probs = coerce_csp(game, phi)
    if which == "L":
        flat = game.flat_u_L
    elif which == "O":
        if game.u_O is None:
            raise InputError("Game has no optimizer payoff")
        flat = game.flat_u_O
    else:
        raise InputError(f"Unknown payoff side {which!r}; use 'L' or 'O'")
    return sum((p * u for p, u in zip(probs, flat) if p), ZERO)


def outer(x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    return tuple(a * b for a in x for b in y)


def product_csp(game: Game, x: Sequence, y: Sequence) -> CSP:
    xs, ys = require_distribution(x, "optimizer mix"), require_distribution(y, "learner mix")
    check_dim(xs, game.m, "optimizer mix")
    check_dim(ys, game.n, "learner mix")
    return CSP.of(game, outer(xs, ys))


def pure_csp(game: Game, i: int, j: int) -> Vector:
    return unit(game.dim, game.index(i, j))


def marginals(game: Game, phi: CSPLike) -> Tuple[Vector, Vector]:
    probs = coerce_csp(game, phi)
    x = tuple(sum(probs[game.index(i, j)] for j in range(game.n)) for i in range(game.m))
    y = tuple(sum(probs[game.index(i, j)] for i in range(game.m)) for j in range(game.n))
    return x, y


# ============================================================================
# VALIDATION
# ============================================================================

def cone_rows(game: Game, j: int) -> List[Tuple[Vector, Fraction]]:
    """Rows u_L(X, j') - u_L(X, j) <= 0 for all j' != j: X lies in the best-response cone of j"""
    rows = []
    for other in range(game.n):
        if other != j:
            rows.append((tuple(game.u_L[i][other] - game.u_L[i][j] for i in range(game.m)), ZERO))
    return rows


def incentive_margin(game: Game, j: int) -> Tuple[Fraction, Vector]:
    """
    Largest delta with some x in the simplex where u_L(x, j) >= u_L(x, j') + delta for all j' != j

    Positive delta: j is uniquely incentivizable. Zero: only weakly. Negative:
    j is never a best response. Returns (delta, x attaining it).
    """
    if not 0 <= j < game.n:
        raise InputError(f"Learner action {j} out of range for n={game.n}")
    dim = game.m + 1
    rows = [(neg(unit(dim, i)), ZERO) for i in range(game.m)]
    for normal, _ in cone_rows(game, j):
        rows.append((tuple(normal) + (ONE,), ZERO))
    rows.append((unit(dim, game.m), MARGIN_CAP))
    system = HalfspaceSystem(dim=dim, rows=tuple(rows), equalities=(((ONE,) * game.m + (ZERO,), ONE),))
    result = solve_lp(unit(dim, game.m), system, Sense.MAX)
    return result.value, result.point[: game.m]


def phi_plus(game: Game) -> Tuple[List[Tuple[int, int]], Fraction]:
    """All pure pairs maximizing u_L, and the maximum"""
    top = max(v for row in game.u_L for v in row)
    pairs = [(i, j) for i in range(game.m) for j in range(game.n) if game.u_L[i][j] == top]
    return pairs, top


def validate(game: Game) -> ValidationReport:
    """
    Classify every learner action and locate the learner-optimal pure pairs

    A game is valid for menu construction when no learner action is weakly
    (or strictly) dominated. Several maximizing pure pairs are reported but do
    not invalidate the game.
    """
    actions: List[ActionReport] = []
    violations: List[str] = []
    for j in range(game.n):
        margin, x = incentive_margin(game, j)
        if margin > 0:
            action_class = ActionClass.NON_DOMINATED
        elif margin == 0:
            action_class = ActionClass.WEAKLY_DOMINATED
            violations.append(f"learner action {game.learner_label(j)} is weakly dominated")
        else:
            action_class = ActionClass.STRICTLY_DOMINATED
            violations.append(f"learner action {game.learner_label(j)} is strictly dominated")
        actions.append(
            ActionReport(action=j, label=game.learner_label(j), action_class=action_class, margin=margin, witness_x=x)
        )

    pairs, top = phi_plus(game)
    report = ValidationReport(
        game_name=game.name,
        valid=not violations,
        phi_plus=pairs,
        phi_plus_unique=len(pairs) == 1,
        phi_plus_value=top,
        actions=actions,
        violations=violations,
    )
    logger.info(
        f"Validated game {game.name or ''}: valid={report.valid}",
        extra={"m": game.m, "n": game.n, "violations": len(violations)},
    )
    return report


def require_valid(game: Game) -> ValidationReport:
    report = validate(game)
    if not report.valid:
        raise AssumptionViolationError("; ".join(report.violations))
    return report


# ============================================================================
# ZERO-SUM VALUE
# ============================================================================

class ZeroSumValue(NamedTuple):
    value: Fraction
    x: Vector
    y: Vector


def _simplex_rows(dim: int, size: int) -> List[Tuple[Vector, Fraction]]:
    return [(neg(unit(dim, k)), ZERO) for k in range(size)]


def zero_sum_value(game: Game) -> ZeroSumValue:
    """
    U_ZS = min_x max_j u_L(x, j) with a saddle pair

    The optimizer's LP (min v, u_L(x, j) <= v) and the learner's LP
    (max w, u_L(i, y) >= w) are both solved; their values must agree.
    """
    m, n = game.m, game.n

    # Optimizer: variables (x_1..x_m, v)
    rows = _simplex_rows(m + 1, m)
    for j in range(n):
        rows.append((tuple(game.u_L[i][j] for i in range(m)) + (-ONE,), ZERO))
    primal = solve_lp(
        unit(m + 1, m),
        HalfspaceSystem(m + 1, tuple(rows), (((ONE,) * m + (ZERO,), ONE),)),
        Sense.MIN,
    )

    # Learner: variables (y_1..y_n, w)
    rows = _simplex_rows(n + 1, n)
    for i in range(m):
        rows.append((tuple(-game.u_L[i][j] for j in range(n)) + (ONE,), ZERO))
    dual = solve_lp(
        unit(n + 1, n),
        HalfspaceSystem(n + 1, tuple(rows), (((ONE,) * n + (ZERO,), ONE),)),
        Sense.MAX,
    )

    if primal.value != dual.value:
        raise LPCertificateError(f"Minimax values disagree: {primal.value} vs {dual.value}")
    return ZeroSumValue(value=primal.value, x=primal.point[:m], y=dual.point[:n])


# ============================================================================
# REGRET
# ============================================================================

def regret(game: Game, phi: CSPLike) -> Fraction:
    """max_j* u_L(x, j*) - u_L(phi), with x the optimizer marginal of phi"""
    x, _ = marginals(game, phi)
    return max(learner_payoffs(game, x)) - expected_payoff(game, phi)


def swap_regret(game: Game, phi: CSPLike) -> Fraction:
    """Sum over learner actions j of the best clamped gain from swapping j to another action"""
    probs = coerce_csp(game, phi)
    total = ZERO
    for j in range(game.n):
        column = [probs[game.index(i, j)] for i in range(game.m)]
        if not any(column):
            continue
        played = learner_payoffs(game, column)
        gain = max(played) - played[j]
        if gain > 0:
            total += gain
    return total


def mixture_value(menu_value: Callable[[Vector], Fraction], components: Sequence[Tuple[object, Sequence]]) -> Fraction:
    """Learner value against a finite mixture of optimizers: sum of weight * menu_value(uO)"""
    if not components:
        raise InputError("mixture_value needs at least one component")
    weights = [to_rational(w) for w, _ in components]
    if any(w < 0 for w in weights) or sum(weights, ZERO) != ONE:
        raise InputError("mixture weights must be nonnegative and sum to 1")
    return sum((w * menu_value(as_vector(uO)) for w, (_, uO) in zip(weights, components) if w), ZERO)


# ============================================================================
# PERTURBED COUNTEREXAMPLE FAMILY
# ============================================================================

PERTURBATION_BOUND = Fraction(1, 100)


def perturbed_game(eps: Optional[Sequence] = None, name: Optional[str] = None) -> Game:
    """
    The 2x3 game whose mean-based menu is Pareto-dominated, with learner payoffs

        A: (e1, e2)   B: (-1/6 + e3, 1/3 + e4)   C: (-1/2 + e5, 1/2 + e6)

    against optimizer actions (N, Y). All e are in [0, 1/100]; when any is
    nonzero, e1 > e2 is required. eps=None gives the unperturbed game.
    """
    values = as_vector(eps) if eps is not None else (ZERO,) * 6
    if len(values) != 6:
        raise InputError(f"perturbed_game needs 6 perturbations, got {len(values)}")
    if any(not ZERO <= e <= PERTURBATION_BOUND for e in values):
        raise InputError("perturbations must lie in [0, 1/100]")
    e1, e2, e3, e4, e5, e6 = values
    if any(values) and not e1 > e2:
        raise InputError("perturbations need e1 > e2")
    u_L = [
        [e1, Fraction(-1, 6) + e3, Fraction(-1, 2) + e5],
        [e2, Fraction(1, 3) + e4, Fraction(1, 2) + e6],
    ]
    return Game.build(
        u_L,
        name=name or ("mb_counterexample" if not any(values) else "mb_counterexample_perturbed"),
        optimizer_actions=("N", "Y"),
        learner_actions=("A", "B", "C"),
    )

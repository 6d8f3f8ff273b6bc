"""
Learning Algorithms

Stateful learners for the repeated-game simulator. Every learner plays a
mixed strategy each round (no action sampling) and observes the optimizer's
full mixed strategy afterwards.

CRITICAL RESPONSIBILITIES:
1. FTRL (negentropy / quadratic), follow-the-leader and a no-swap-regret learner
2. A Blackwell learner approaching a target menu
3. The menu-extension protocol learner (listen, follow the cycle, fall back on deviation)
4. History-independent fixtures and a grim-trigger fixture
"""

import logging
import math
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from menuforge.core.config import settings
from menuforge.core.exceptions import InputError, UnsupportedShapeError
from menuforge.domain.games.v1 import Game
from menuforge.domain.menus.v1 import Menu
from menuforge.domain.simulation.v1 import EtaSchedule, LearnerKind, LearnerSpec, Regularizer
from menuforge.geometry.hausdorff import project_onto_hull, vertex_array
from menuforge.geometry.polytope import contains_point, contains_polytope
from menuforge.geometry.rational import Vector
from menuforge.services.menus import build_nsr_menu, fixed_action_menu, is_valid_menu, response_for


logger = logging.getLogger(__name__)

# Grid resolution of the validity check run on Blackwell targets
VALIDITY_GRID = 12


class Learner(ABC):
    """One learner for one horizon; act() then observe() once per round"""

    def __init__(self, game: Game, T: int):
        self.game = game
        self.T = T
        self.U = np.array([[float(v) for v in row] for row in game.u_L])

    @abstractmethod
    def act(self, t: int) -> np.ndarray:
        """Mixed strategy for round t (0-based)"""

    def observe(self, x: np.ndarray, y: np.ndarray) -> None:
        """Feedback after round t: the optimizer's mix x and the mix y that was played"""


def pure(n: int, j: int) -> np.ndarray:
    y = np.zeros(n)
    y[j] = 1.0
    return y


# ============================================================================
# FTRL FAMILY
# ============================================================================

def softmax(z: np.ndarray) -> np.ndarray:
    w = np.exp(z - z.max())
    return w / w.sum()


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the simplex (sorted-threshold algorithm)"""
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u) - 1.0
    ks = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - cumulative / ks > 0)[0][-1]
    theta = cumulative[rho] / (rho + 1)
    return np.maximum(v - theta, 0.0)


class FTRLLearner(Learner):
    """argmax_y eta <S, y> - R(y) with S the cumulative payoff vector"""

    def __init__(self, game: Game, T: int, regularizer: Regularizer, eta: EtaSchedule):
        super().__init__(game, T)
        self.regularizer = regularizer
        self.eta = eta.value(T, game.n)
        self.S = np.zeros(game.n)

    def act(self, t: int) -> np.ndarray:
        if self.regularizer == Regularizer.NEGENTROPY:
            return softmax(self.eta * self.S)
        return project_to_simplex(self.eta * self.S)

    def observe(self, x: np.ndarray, y: np.ndarray) -> None:
        self.S += x @ self.U


class FTLLearner(Learner):
    """Best response to the cumulative payoffs, lowest index on ties"""

    def __init__(self, game: Game, T: int):
        super().__init__(game, T)
        self.S = np.zeros(game.n)

    def act(self, t: int) -> np.ndarray:
        return pure(self.game.n, int(np.argmax(self.S)))

    def observe(self, x: np.ndarray, y: np.ndarray) -> None:
        self.S += x @ self.U


# ============================================================================
# NO-SWAP-REGRET
# ============================================================================

def stationary_distribution(Q: np.ndarray, start: Optional[np.ndarray] = None, tolerance: Optional[float] = None) -> np.ndarray:
    """p = p Q for a row-stochastic Q: lazy power iteration, least squares when it stalls"""
    tol = settings.POWER_ITERATION_TOLERANCE if tolerance is None else tolerance
    n = len(Q)
    p = np.full(n, 1.0 / n) if start is None else start.copy()
    lazy = 0.5 * (Q + np.eye(n))
    for _ in range(1000):
        nxt = p @ lazy
        if np.abs(nxt - p).sum() < tol:
            return nxt / nxt.sum()
        p = nxt
    A = np.vstack([Q.T - np.eye(n), np.ones((1, n))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    p, *_ = np.linalg.lstsq(A, b, rcond=None)
    p = np.clip(p, 0.0, None)
    return p / p.sum()


class SwapRegretLearner(Learner):
    """
    One multiplicative-weights copy per action; copy j is charged the payoff
    scaled by the probability of playing j, and the learner plays the
    stationary distribution of the stacked copy strategies.
    """

    def __init__(self, game: Game, T: int, eta: Optional[EtaSchedule] = None):
        super().__init__(game, T)
        n = game.n
        self.eta = (eta or EtaSchedule()).value(T, n)
        self.S = np.zeros((n, n))
        self.p = np.full(n, 1.0 / n)

    def act(self, t: int) -> np.ndarray:
        z = self.eta * self.S
        Q = np.exp(z - z.max(axis=1, keepdims=True))
        Q /= Q.sum(axis=1, keepdims=True)
        self.p = stationary_distribution(Q, start=self.p)
        return self.p

    def observe(self, x: np.ndarray, y: np.ndarray) -> None:
        self.S += np.outer(y, x @ self.U)


# ============================================================================
# BLACKWELL APPROACHABILITY
# ============================================================================

def minimax_response(D: np.ndarray) -> np.ndarray:
    """
    y in Delta_n minimizing max_i (D y)_i

    LP over (y, v): min v s.t. D y - v <= 0, sum y = 1, y >= 0.
    """
    m, n = D.shape
    c = np.zeros(n + 1)
    c[-1] = 1.0
    A_ub = np.hstack([D, -np.ones((m, 1))])
    A_eq = np.hstack([np.ones(n), [0.0]])[None, :]
    bounds = [(0, None)] * n + [(None, None)]
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m), A_eq=A_eq, b_eq=np.ones(1), bounds=bounds, method="highs")
    if not res.success:
        logger.warning(f"Minimax LP failed ({res.message}); playing uniform")
        return np.full(n, 1.0 / n)
    y = np.clip(res.x[:-1], 0.0, None)
    return y / y.sum()


def default_response(target: Menu) -> np.ndarray:
    """Exact response of the target menu to the uniform optimizer mix"""
    game = target.game
    y = response_for(target, tuple(Fraction(1, game.m) for _ in range(game.m)))
    if y is None:
        raise InputError(f"Target menu {target.label} has no response to the uniform optimizer mix")
    return np.array([float(v) for v in y])


def blackwell_learner_step(target: Menu, average: Sequence[float]) -> np.ndarray:
    """Next learner mix given the running average CSP (stateless form of the learner's step)"""
    average = np.asarray(average, dtype=float)
    projection, _ = project_onto_hull(average, vertex_array(target.polytope))
    direction = average - projection
    if np.linalg.norm(direction) < 1e-7:
        return default_response(target)
    return minimax_response(direction.reshape(target.game.m, target.game.n))


class BlackwellLearner(Learner):
    """
    Drives the running average CSP toward the target menu: outside it, play
    the y that keeps the next outer product on the target's side of the
    hyperplane through the projection.
    """

    def __init__(self, game: Game, T: int, target: Menu):
        super().__init__(game, T)
        check = is_valid_menu(target, VALIDITY_GRID)
        if not check.passed:
            raise InputError(f"Target menu {target.label} has no response to x = {check.failing_x}")
        self.V = vertex_array(target.polytope)
        self.default = default_response(target)
        self.total = np.zeros(game.dim)
        self.rounds = 0
        self.weights: Optional[np.ndarray] = None
        self.distance = 0.0

    def act(self, t: int) -> np.ndarray:
        if self.rounds == 0:
            return self.default
        average = self.total / self.rounds
        projection, self.weights = project_onto_hull(
            average, self.V, weights=self.weights, tolerance=1e-12, max_iterations=50
        )
        direction = average - projection
        self.distance = float(np.linalg.norm(direction))
        if self.distance < 1e-7:
            return self.default
        D = direction.reshape(self.game.m, self.game.n)
        return minimax_response(D)

    def observe(self, x: np.ndarray, y: np.ndarray) -> None:
        self.total += np.outer(x, y).ravel()
        self.rounds += 1


# ============================================================================
# MENU-EXTENSION PROTOCOL
# ============================================================================

def protocol_parameters(game: Game, T: int) -> Tuple[int, int]:
    """(C, L): net resolution C = isqrt(T) + 1 and base-m digits per count"""
    if game.m < 2:
        raise UnsupportedShapeError("The protocol needs at least two optimizer actions to signal")
    C = math.isqrt(T) + 1
    digits, value = 0, C
    while value > 0:
        value //= game.m
        digits += 1
    return C, digits


def net_counts(target: Sequence, C: int) -> List[int]:
    """Integer counts summing to C nearest to C * target (largest remainder)"""
    scaled = [Fraction(v) * C for v in target]
    counts = [math.floor(v) for v in scaled]
    order = sorted(range(len(scaled)), key=lambda k: (-(scaled[k] - counts[k]), k))
    for k in order[: C - sum(counts)]:
        counts[k] += 1
    return counts


def encode_counts(counts: Sequence[int], base: int, digits: int) -> List[int]:
    """Most significant digit first, one block of digits per count"""
    symbols = []
    for count in counts:
        block = []
        for _ in range(digits):
            block.append(count % base)
            count //= base
        symbols.extend(reversed(block))
    return symbols


def decode_counts(symbols: Sequence[int], base: int, digits: int) -> List[int]:
    counts = []
    for start in range(0, len(symbols), digits):
        value = 0
        for digit in symbols[start:start + digits]:
            value = value * base + digit
        counts.append(value)
    return counts


def cycle_schedule(counts: Sequence[int], n: int) -> List[Tuple[int, int]]:
    """Pairs (i, j) in lexicographic order, pair k repeated counts[k] times"""
    return [divmod(k, n) for k, c in enumerate(counts) for _ in range(c)]


class ProtocolLearner(Learner):
    """
    Listens for a net CSP encoded in the optimizer's pure actions, then plays
    its learner side of a cyclic joint schedule. Any deviation by the optimizer
    hands the rest of the horizon to a fresh base learner.
    """

    def __init__(self, game: Game, T: int, extension: Menu, base: LearnerSpec):
        super().__init__(game, T)
        self.extension = extension
        self.base_spec = base
        self.C, self.digits = protocol_parameters(game, T)
        self.listen_rounds = game.dim * self.digits
        self.symbols: List[int] = []
        self.schedule: Optional[List[Tuple[int, int]]] = None
        self.fallback: Optional[Learner] = None
        self.fallback_start = 0
        self.position = 0
        self.current = 0

    def _fall_back(self, t: int) -> None:
        remaining = max(self.T - t, 1)
        self.fallback = make_learner(self.base_spec, self.game, remaining)
        self.fallback_start = t
        logger.debug(f"Protocol learner falls back at round {t}")

    def act(self, t: int) -> np.ndarray:
        self.current = t
        if self.fallback is not None:
            return self.fallback.act(t - self.fallback_start)
        if self.schedule is None:
            return np.full(self.game.n, 1.0 / self.game.n)
        _, j = self.schedule[self.position % len(self.schedule)]
        return pure(self.game.n, j)

    def _decode(self, t: int) -> None:
        counts = decode_counts(self.symbols, self.game.m, self.digits)
        if sum(counts) != self.C:
            self._fall_back(t)
            return
        point = tuple(Fraction(c, self.C) for c in counts)
        if not contains_point(self.extension.polytope, point):
            self._fall_back(t)
            return
        self.schedule = cycle_schedule(counts, self.game.n)

    def observe(self, x: np.ndarray, y: np.ndarray) -> None:
        if self.fallback is not None:
            self.fallback.observe(x, y)
            return
        t = self.current
        if self.schedule is None:
            i = int(np.argmax(x))
            if x[i] < 1.0 - 1e-12:
                self._fall_back(t + 1)
                return
            self.symbols.append(i)
            if len(self.symbols) == self.listen_rounds:
                self._decode(t + 1)
            return
        expected, _ = self.schedule[self.position % len(self.schedule)]
        if x[expected] < 1.0 - 1e-12:
            self._fall_back(t + 1)
            return
        self.position += 1


def protocol_learner(extension: Menu, base: LearnerSpec, T: int) -> LearnerSpec:
    """
    Spec of the protocol learner; the extension must contain the base
    learner's menu where that menu is known exactly
    """
    game = extension.game
    protocol_parameters(game, T)
    if base.kind == LearnerKind.CONSTANT:
        required = fixed_action_menu(game, base.action)
    else:
        required = build_nsr_menu(game)
    if not contains_polytope(extension.polytope, required.polytope):
        raise InputError(f"Extension {extension.label} does not contain the base learner's menu {required.label}")
    if base.kind in (LearnerKind.FTRL, LearnerKind.FTL) and (game.m, game.n) == (2, 3):
        from menuforge.services.mean_based import build_mb_menu

        mb = build_mb_menu(game)
        if not contains_polytope(extension.polytope, mb.polytope):
            raise InputError(f"Extension {extension.label} does not contain the mean-based menu")
    return LearnerSpec(kind=LearnerKind.PROTOCOL, target_menu=extension, base=base, horizon=T)


# ============================================================================
# FIXTURES
# ============================================================================

class ConstantLearner(Learner):
    def __init__(self, game: Game, T: int, action: int):
        super().__init__(game, T)
        self.y = pure(game.n, action)

    def act(self, t: int) -> np.ndarray:
        return self.y


class FixedMixLearner(Learner):
    def __init__(self, game: Game, T: int, mix: Vector):
        super().__init__(game, T)
        self.y = np.array([float(v) for v in mix])

    def act(self, t: int) -> np.ndarray:
        return self.y


class AlternatingLearner(Learner):
    """Cycles through the given actions, one per round"""

    def __init__(self, game: Game, T: int, actions: Sequence[int]):
        super().__init__(game, T)
        self.actions = list(actions)

    def act(self, t: int) -> np.ndarray:
        return pure(self.game.n, self.actions[t % len(self.actions)])


class GrimTriggerLearner(Learner):
    """Plays `before` until the optimizer puts weight on the trigger action, then `after` forever"""

    def __init__(self, game: Game, T: int, before: int, after: int, trigger: int):
        super().__init__(game, T)
        self.before, self.after, self.trigger = before, after, trigger
        self.fired = False

    def act(self, t: int) -> np.ndarray:
        return pure(self.game.n, self.after if self.fired else self.before)

    def observe(self, x: np.ndarray, y: np.ndarray) -> None:
        if x[self.trigger] > 0:
            self.fired = True


class UniformLearner(Learner):
    def act(self, t: int) -> np.ndarray:
        return np.full(self.game.n, 1.0 / self.game.n)


def _check_action(game: Game, action: int, what: str) -> int:
    if not 0 <= action < game.n:
        raise InputError(f"{what} {action} out of range for n={game.n}")
    return action


def make_learner(spec: LearnerSpec, game: Game, T: int) -> Learner:
    """Instantiate a learner spec for one game and horizon"""
    kind = spec.kind
    if kind == LearnerKind.FTRL:
        return FTRLLearner(game, T, spec.regularizer, spec.eta)
    if kind == LearnerKind.FTL:
        return FTLLearner(game, T)
    if kind == LearnerKind.SWAP_REGRET:
        return SwapRegretLearner(game, T, spec.eta)
    if kind in (LearnerKind.BLACKWELL, LearnerKind.PROTOCOL) and spec.target_menu.game.dim != game.dim:
        raise InputError("Target menu does not belong to a game of this shape")
    if kind == LearnerKind.BLACKWELL:
        return BlackwellLearner(game, T, spec.target_menu)
    if kind == LearnerKind.PROTOCOL:
        return ProtocolLearner(game, T, spec.target_menu, spec.base)
    if kind == LearnerKind.CONSTANT:
        return ConstantLearner(game, T, _check_action(game, spec.action, "Constant action"))
    if kind == LearnerKind.FIXED_MIX:
        if len(spec.mix) != game.n:
            raise InputError(f"Mix has {len(spec.mix)} entries, game has n={game.n}")
        return FixedMixLearner(game, T, spec.mix)
    if kind == LearnerKind.ALTERNATING:
        return AlternatingLearner(game, T, [_check_action(game, a, "Cycle action") for a in spec.actions])
    if kind == LearnerKind.GRIM_TRIGGER:
        before, after = (_check_action(game, a, "Trigger action") for a in spec.actions)
        if not 0 <= spec.trigger_action < game.m:
            raise InputError(f"Trigger optimizer action {spec.trigger_action} out of range for m={game.m}")
        return GrimTriggerLearner(game, T, before, after, spec.trigger_action)
    return UniformLearner(game, T)

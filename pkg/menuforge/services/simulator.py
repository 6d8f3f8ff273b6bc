"""
Repeated-Game Simulator

Runs a learner against an optimizer for T rounds, tracking mixed strategies
exactly as float distributions, and measures what the transcript implies:
empirical CSPs, regret curves, mean-based violations and finite-time menus.

CRITICAL RESPONSIBILITIES:
1. Deterministic play given (game, specs, T, seed)
2. Prefix-wise external and swap regret of the realized play
3. Exact finite-time menus of history-independent learners
"""

import itertools
import logging
from fractions import Fraction
from functools import partial
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from menuforge.core.config import settings
from menuforge.core.exceptions import InputError
from menuforge.core.parallel import parallel_map
from menuforge.domain.games.v1 import Game
from menuforge.domain.menus.v1 import Menu
from menuforge.domain.simulation.v1 import (
    AuditMode,
    EmpiricalCSP,
    GammaRate,
    LearnerKind,
    LearnerSpec,
    OBLIVIOUS_KINDS,
    OptimizerKind,
    OptimizerSpec,
    Transcript,
)
from menuforge.geometry.hausdorff import directed_distance
from menuforge.geometry.polytope import convex_hull
from menuforge.geometry.rational import Vector, ONE, ZERO
from menuforge.services.learners import make_learner, protocol_parameters
from menuforge.services.optimizers import cooperative_counts, make_optimizer


logger = logging.getLogger(__name__)

__all__ = [
    "run",
    "empirical_csp",
    "regret_curves",
    "mean_based_audit",
    "oblivious_menu",
    "empirical_menu",
    "distance_to_menu",
    "directed_distance",
    "default_checkpoints",
    "prefix_csps",
    "protocol_gap",
]


def _clean(mix: np.ndarray) -> np.ndarray:
    mix = np.clip(np.asarray(mix, dtype=float), 0.0, None)
    return mix / mix.sum()


def run(
    game: Game,
    learner: LearnerSpec,
    optimizer: OptimizerSpec,
    T: int,
    seed: Optional[int] = None,
) -> Transcript:
    """
    Play T rounds: the learner commits to y_t, the optimizer answers with x_t,
    then the learner observes (x_t, y_t)
    """
    if T < 1:
        raise InputError(f"Horizon must be positive, got {T}")
    seed = settings.DEFAULT_SEED if seed is None else seed
    player = make_learner(learner, game, T)
    opponent = make_optimizer(optimizer, game, T, seed, learner=learner)

    logger.info(
        f"Simulating {learner.kind.value} vs {optimizer.kind.value}",
        extra={"game": game.name, "T": T, "seed": seed},
    )
    X = np.empty((T, game.m))
    Y = np.empty((T, game.n))
    for t in range(T):
        y = _clean(player.act(t))
        x = _clean(opponent.act(t, y))
        player.observe(x, y)
        X[t] = x
        Y[t] = y
    return Transcript(T=T, optimizer_mixes=X, learner_mixes=Y, seed=seed)


def empirical_csp(transcript: Transcript) -> EmpiricalCSP:
    """(1/T) sum of x_t (x) y_t, flattened row-major"""
    X, Y = transcript.optimizer_mixes, transcript.learner_mixes
    values = np.einsum("ti,tj->ij", X, Y).ravel() / transcript.T
    return EmpiricalCSP(m=X.shape[1], n=Y.shape[1], values=values / values.sum())


def _payoff_vectors(game: Game, transcript: Transcript) -> np.ndarray:
    U = np.array([[float(v) for v in row] for row in game.u_L])
    return transcript.optimizer_mixes @ U


def regret_curves(game: Game, transcript: Transcript) -> Tuple[np.ndarray, np.ndarray]:
    """Cumulative external regret and swap regret after each round"""
    if transcript.optimizer_mixes.shape[1] != game.m or transcript.learner_mixes.shape[1] != game.n:
        raise InputError("Transcript shape does not match the game")
    R = _payoff_vectors(game, transcript)
    Y = transcript.learner_mixes
    realized = np.cumsum((R * Y).sum(axis=1))
    regret = np.cumsum(R, axis=0).max(axis=1) - realized
    # M[t, j, k]: payoff collected had every unit of weight on j moved to k
    M = np.cumsum(Y[:, :, None] * R[:, None, :], axis=0)
    swap = M.max(axis=2).sum(axis=1) - realized
    return regret, swap


def mean_based_audit(
    game: Game,
    transcript: Transcript,
    gamma: Optional[GammaRate] = None,
    mode: AuditMode = AuditMode.HORIZON,
) -> int:
    """
    Rounds where an action trailing the historical leader by more than the
    threshold still received weight above gamma

    horizon: gap > gamma(T) T forces weight <= gamma(T)
    average: gap > gamma(t) t forces weight <= gamma(t)

    MW with a horizon-tuned rate passes the horizon audit but not the average
    one. Its step size is set for T, so in early rounds an action trailing by
    more than gamma(t) t still keeps weight above gamma(t). 2x2 games such as
    battle_of_sexes record thousands of such rounds at T = 1e5.
    """
    gamma = gamma or GammaRate()
    mode = AuditMode(mode)
    R = _payoff_vectors(game, transcript)
    T = transcript.T
    before = np.vstack([np.zeros((1, game.n)), np.cumsum(R, axis=0)[:-1]])
    gaps = before.max(axis=1, keepdims=True) - before
    if mode == AuditMode.HORIZON:
        rate = np.full((T, 1), gamma.value(T))
        threshold = rate * T
    else:
        rounds = np.arange(1, T + 1, dtype=float)[:, None]
        rate = gamma.scale * rounds ** (-gamma.exponent)
        threshold = rate * rounds
    violations = ((gaps > threshold) & (transcript.learner_mixes > rate)).any(axis=1)
    count = int(violations.sum())
    logger.info(f"Mean-based audit: {count} violating rounds", extra={"T": T, "mode": mode.value})
    return count


# ============================================================================
# FINITE-TIME MENUS
# ============================================================================

def _exact_learner_mix(spec: LearnerSpec, game: Game, t: int) -> Vector:
    def pure(j: int) -> Vector:
        return tuple(ONE if k == j else ZERO for k in range(game.n))

    if spec.kind == LearnerKind.CONSTANT:
        return pure(spec.action)
    if spec.kind == LearnerKind.FIXED_MIX:
        return spec.mix
    if spec.kind == LearnerKind.ALTERNATING:
        return pure(spec.actions[t % len(spec.actions)])
    return tuple(Fraction(1, game.n) for _ in range(game.n))


def oblivious_menu(learner: LearnerSpec, game: Game, T: int) -> Menu:
    """
    Exact menu of a history-independent learner at horizon T: the optimizer
    picks one mix per distinct learner mix, so the vertices come from pure
    optimizer actions assigned per distinct mix
    """
    if learner.kind not in OBLIVIOUS_KINDS:
        raise InputError(f"{learner.kind.value} learners react to the optimizer; no closed-form menu")
    counts = {}
    for t in range(T):
        y = _exact_learner_mix(learner, game, t)
        if len(y) != game.n:
            raise InputError(f"Learner mix has {len(y)} entries, game has n={game.n}")
        counts[y] = counts.get(y, 0) + 1

    mixes = list(counts.items())
    points = []
    for choice in itertools.product(range(game.m), repeat=len(mixes)):
        probs = [ZERO] * game.dim
        for i, (y, c) in zip(choice, mixes):
            for j, yj in enumerate(y):
                probs[game.index(i, j)] += Fraction(c, T) * yj
        points.append(tuple(probs))
    return Menu(polytope=convex_hull(points), game=game, label=f"{learner.kind.value}@{T}")


def _empirical_point(game: Game, learner: LearnerSpec, T: int, seed: int, optimizer: OptimizerSpec) -> Vector:
    transcript = run(game, learner, optimizer, T, seed)
    return empirical_csp(transcript).to_csp(game).probs


def empirical_menu(
    game: Game,
    learner: LearnerSpec,
    optimizers: Sequence[OptimizerSpec],
    T: int,
    seed: Optional[int] = None,
    jobs: Optional[int] = None,
) -> Menu:
    """Hull of the empirical CSPs reached by a family of optimizers"""
    seed = settings.DEFAULT_SEED if seed is None else seed
    points = parallel_map(partial(_empirical_point, game, learner, T, seed), optimizers, jobs=jobs)
    return Menu(polytope=convex_hull(points), game=game, label=f"empirical:{learner.kind.value}@{T}")


def distance_to_menu(csps: Sequence[EmpiricalCSP], menu: Menu) -> float:
    """Largest Euclidean distance from the empirical CSPs to the menu"""
    return directed_distance([c.values for c in csps], menu.polytope)


# ============================================================================
# CHECKPOINTS
# ============================================================================

def default_checkpoints(T: int, count: int = 20) -> List[int]:
    """Geometrically spaced rounds ending at T"""
    points = np.unique(np.geomspace(1, T, num=min(count, T)).round().astype(int))
    return [int(c) for c in points if 1 <= c <= T]


def prefix_csps(transcript: Transcript, checkpoints: Sequence[int]) -> List[EmpiricalCSP]:
    """Empirical CSP of the first c rounds for every checkpoint c"""
    X, Y = transcript.optimizer_mixes, transcript.learner_mixes
    m, n = X.shape[1], Y.shape[1]
    totals = np.cumsum(np.einsum("ti,tj->tij", X, Y).reshape(transcript.T, m * n), axis=0)
    csps = []
    for c in checkpoints:
        if not 1 <= c <= transcript.T:
            raise InputError(f"Checkpoint {c} outside 1..{transcript.T}")
        csps.append(EmpiricalCSP(m=m, n=n, values=totals[c - 1] / c))
    return csps


class ProtocolGap(NamedTuple):
    target: Vector
    linf_gap: float
    bound: float


def protocol_gap(game: Game, learner: LearnerSpec, optimizer: OptimizerSpec, transcript: Transcript) -> ProtocolGap:
    """
    L-infinity gap between the realized CSP and the net point the cooperative
    optimizer signalled, with the bound 2/C + mn L / T
    """
    if learner.kind != LearnerKind.PROTOCOL or optimizer.kind != OptimizerKind.COOPERATIVE:
        raise InputError("Protocol gap needs a protocol learner and a cooperative optimizer")
    T = transcript.T
    C, digits = protocol_parameters(game, T)
    counts = cooperative_counts(learner.target_menu, optimizer.target, C)
    target = tuple(Fraction(c, C) for c in counts)
    gap = empirical_csp(transcript).linf_distance(target)
    bound = 2.0 / C + game.dim * digits / T
    logger.info(f"Protocol gap {gap:.4f} against bound {bound:.4f}", extra={"C": C, "digits": digits, "T": T})
    return ProtocolGap(target=target, linf_gap=gap, bound=bound)

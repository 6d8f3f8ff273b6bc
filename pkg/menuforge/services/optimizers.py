"""
Optimizer Strategies

Optimizer players for the simulator. All of them are oblivious to the
learner's play: each spec resolves to a fixed sequence of mixes for the
horizon (runs of equal mixes, sampled pure actions, or the protocol signal
followed by the joint cycle).
"""

import bisect
import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from menuforge.core.exceptions import InputError
from menuforge.domain.games.v1 import Game
from menuforge.domain.menus.v1 import Menu
from menuforge.domain.simulation.v1 import LearnerKind, LearnerSpec, OptimizerKind, OptimizerSpec, ScheduleRun
from menuforge.domain.trajectories.v1 import Trajectory, TrajectoryKind
from menuforge.geometry.polytope import contains_point, maximize_with_tiebreak
from menuforge.geometry.rational import ZERO, as_vector
from menuforge.services.learners import cycle_schedule, encode_counts, net_counts, protocol_parameters
from menuforge.services.mean_based import build_mb_menu, discretize_runs, unroll_spiral, vertex_witness


logger = logging.getLogger(__name__)

EXPLOITER_EPSILON = Fraction(1, 1000)
MAX_SPIRAL_CYCLES = 50


class Optimizer:
    """Plays runs of mixes in order; the last run repeats until the horizon"""

    def __init__(self, game: Game, runs: Sequence[ScheduleRun]):
        if not runs:
            raise InputError("An optimizer needs at least one run")
        for run in runs:
            if len(run.x) != game.m:
                raise InputError(f"Optimizer mix has {len(run.x)} entries, game has m={game.m}")
        self.mixes = [np.array([float(v) for v in run.x]) for run in runs]
        self.ends = list(np.cumsum([run.rounds for run in runs]))

    def act(self, t: int, y: Optional[np.ndarray] = None) -> np.ndarray:
        k = bisect.bisect_right(self.ends, t)
        return self.mixes[min(k, len(self.mixes) - 1)]


class PureSequenceOptimizer:
    """Plays a precomputed sequence of pure actions, then repeats the last one"""

    def __init__(self, game: Game, actions: Sequence[int]):
        self.eye = np.eye(game.m)
        self.actions = list(actions)

    def act(self, t: int, y: Optional[np.ndarray] = None) -> np.ndarray:
        return self.eye[self.actions[min(t, len(self.actions) - 1)]]


# ============================================================================
# EXPLOITER
# ============================================================================

def spiral_cycles(trajectory: Trajectory) -> int:
    """Copies needed for the spiral loop to dominate its offset (at most MAX_SPIRAL_CYCLES)"""
    radius = sum(trajectory.X0, ZERO)
    ratio = float((radius + trajectory.total_duration) / radius)
    return max(1, min(math.ceil(math.log(100) / math.log(ratio)), MAX_SPIRAL_CYCLES))


def playable(game: Game, trajectory: Trajectory) -> Trajectory:
    if trajectory.kind == TrajectoryKind.SPIRAL:
        return unroll_spiral(game, trajectory, spiral_cycles(trajectory))
    return trajectory


def exploiter_strategy(game: Game, uO: Sequence, mb: Optional[Menu] = None) -> OptimizerSpec:
    """
    Trajectory optimizer realizing the uO-best vertex of the mean-based menu
    (learner-favourable ties), played from that vertex's witness
    """
    uO = as_vector(uO)
    if len(uO) != game.dim:
        raise InputError(f"uO has dimension {len(uO)}, game dimension is {game.dim}")
    mb = mb or build_mb_menu(game)
    _, _, vertex = maximize_with_tiebreak(mb.polytope, uO, game.flat_u_L)
    trajectory = playable(game, vertex_witness(mb, vertex))
    logger.info(
        "Exploiter vertex selected",
        extra={"game": game.name, "segments": len(trajectory.segments)},
    )
    return OptimizerSpec(kind=OptimizerKind.TRAJECTORY, trajectory=trajectory, epsilon=EXPLOITER_EPSILON)


# ============================================================================
# COOPERATIVE SIGNALLING
# ============================================================================

def cooperative_counts(extension: Menu, target: Sequence, C: int) -> List[int]:
    """
    Net counts (summing to C) of a point of the extension near the target:
    the target is pulled toward the extension's vertex centroid in steps of
    1/C until its rounding lands inside
    """
    target = as_vector(target)
    vertices = extension.vertices
    centroid = tuple(sum(v[c] for v in vertices) / len(vertices) for c in range(len(target)))
    counts = net_counts(target, C)
    for k in range(C + 1):
        lam = Fraction(k, C)
        point = tuple((1 - lam) * a + lam * b for a, b in zip(target, centroid))
        counts = net_counts(point, C)
        if contains_point(extension.polytope, tuple(Fraction(c, C) for c in counts)):
            return counts
    return counts


def cooperative_actions(game: Game, extension: Menu, target: Sequence, T: int) -> List[int]:
    """Signal digits followed by the optimizer side of the joint cycle, T actions"""
    C, digits = protocol_parameters(game, T)
    counts = cooperative_counts(extension, target, C)
    actions = encode_counts(counts, game.m, digits)
    cycle = [i for i, _ in cycle_schedule(counts, game.n)]
    while len(actions) < T:
        actions.extend(cycle[: T - len(actions)])
    return actions[:T]


# ============================================================================
# FACTORY
# ============================================================================

def make_optimizer(
    spec: OptimizerSpec,
    game: Game,
    T: int,
    seed: int,
    learner: Optional[LearnerSpec] = None,
):
    kind = spec.kind
    if kind == OptimizerKind.FIXED:
        return Optimizer(game, [ScheduleRun(x=spec.x, rounds=T)])
    if kind == OptimizerKind.SCHEDULE:
        return Optimizer(game, spec.rounds)
    if kind == OptimizerKind.EXPLOITER:
        spec = exploiter_strategy(game, spec.uO)
        kind = spec.kind
    if kind == OptimizerKind.TRAJECTORY:
        runs = discretize_runs(game, playable(game, spec.trajectory), T, spec.epsilon)
        return Optimizer(game, runs)
    if kind == OptimizerKind.RANDOM:
        if len(spec.x) != game.m:
            raise InputError(f"Sampling mix has {len(spec.x)} entries, game has m={game.m}")
        rng = np.random.default_rng(seed)
        p = np.array([float(v) for v in spec.x])
        return PureSequenceOptimizer(game, rng.choice(game.m, size=T, p=p / p.sum()))
    if learner is None or learner.kind != LearnerKind.PROTOCOL:
        raise InputError("The cooperative optimizer signals to a protocol learner")
    if len(spec.target) != game.dim:
        raise InputError(f"Target has dimension {len(spec.target)}, game dimension is {game.dim}")
    return PureSequenceOptimizer(game, cooperative_actions(game, learner.target_menu, spec.target, T))

"""
Mean-Based Trajectory Engine

Continuous-time play against mean-based learners. A trajectory is a list of
(optimizer mix, duration, learner action) segments; the learner's action must
be a best response to the average optimizer play at both ends of its
segment. For games with two optimizer actions and three learner actions,
every such profile is a mix of profiles of short "primitive" trajectories,
one polytope per fingerprint, which gives the mean-based menu exactly.

CRITICAL RESPONSIBILITIES:
1. Exact trajectory validation and profiles for any game shape
2. Fingerprint LPs in segment-mass space (states and spiral offsets eliminated)
3. A trajectory witness for every vertex of the mean-based menu
4. Discretization of trajectories into finite optimizer schedules
"""

import itertools
import logging
from fractions import Fraction
from functools import partial
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from menuforge.core.exceptions import (
    AssumptionViolationError,
    EmptyPolytopeError,
    InputError,
    PreconditionError,
    StructureError,
    UnsupportedShapeError,
)
from menuforge.core.parallel import parallel_map
from menuforge.domain.games.v1 import CSP, Game
from menuforge.domain.menus.v1 import Menu
from menuforge.domain.simulation.v1 import ScheduleRun
from menuforge.domain.trajectories.v1 import (
    BoundaryRay,
    Fingerprint,
    MBWitness,
    Segment,
    Trajectory,
    TrajectoryCheck,
    TrajectoryKind,
)
from menuforge.geometry.models import HalfspaceSystem, Polytope
from menuforge.geometry.polytope import contains_point, convex_hull
from menuforge.geometry.rational import Vector, ZERO, ONE, neg, scale, unit
from menuforge.geometry.vertex_enum import eliminate_variable, enumerate_vertices, variable_interval
from menuforge.services.game_model import (
    argmax_actions,
    cone_rows,
    expected_payoff,
    incentive_margin,
    learner_payoffs,
    marginals,
)


logger = logging.getLogger(__name__)


# ============================================================================
# TRAJECTORIES
# ============================================================================

def _check_shape(game: Game, trajectory: Trajectory) -> None:
    if trajectory.m != game.m:
        raise InputError(f"Trajectory mixes have dimension {trajectory.m}, game has m={game.m}")
    for segment in trajectory.segments:
        if not 0 <= segment.b < game.n:
            raise InputError(f"Segment action {segment.b} out of range for n={game.n}")


def validate_trajectory(game: Game, trajectory: Trajectory) -> TrajectoryCheck:
    """
    Both best-response conditions per segment, in exact arithmetic

    A plain trajectory starts at the zero state, which imposes nothing on the
    first action. A spiral must also close: its final state is a multiple of X0.
    """
    _check_shape(game, trajectory)
    states = trajectory.states()
    plain = trajectory.kind == TrajectoryKind.PLAIN

    for i, segment in enumerate(trajectory.segments, start=1):
        label = game.learner_label(segment.b)
        if not (i == 1 and plain):
            if segment.b not in argmax_actions(learner_payoffs(game, states[i - 1])):
                return TrajectoryCheck(
                    valid=False, segment=i, condition="start",
                    detail=f"{label} is not a best response at the start of segment {i}",
                )
        if segment.b not in argmax_actions(learner_payoffs(game, states[i])):
            return TrajectoryCheck(
                valid=False, segment=i, condition="end",
                detail=f"{label} is not a best response at the end of segment {i}",
            )

    if not plain:
        start, end = states[0], states[-1]
        ratio = sum(end, ZERO) / sum(start, ZERO)
        if scale(ratio, start) != end:
            return TrajectoryCheck(valid=False, segment=len(trajectory.segments), condition="closure",
                                   detail="final state is not a multiple of X0")
    return TrajectoryCheck(valid=True)


def profile(game: Game, trajectory: Trajectory) -> CSP:
    """Prof(tau) = sum t_i (x_i (x) b_i) / sum t_i"""
    _check_shape(game, trajectory)
    total = trajectory.total_duration
    probs = [ZERO] * game.dim
    for segment in trajectory.segments:
        for i, xi in enumerate(segment.x):
            if xi:
                probs[game.index(i, segment.b)] += segment.t * xi / total
    return CSP.of(game, probs)


def zero_regret_check(game: Game, trajectory: Trajectory) -> bool:
    """u_L(Prof) equals the best fixed-action payoff against the profile's optimizer marginal"""
    csp = profile(game, trajectory)
    x, _ = marginals(game, csp)
    return expected_payoff(game, csp) == max(learner_payoffs(game, x))


# ============================================================================
# BEST-RESPONSE CONE STRUCTURE (two optimizer actions)
# ============================================================================

class ConeStructure(NamedTuple):
    """Learner actions ordered by decreasing weight on optimizer action 0, with tie points"""

    order: Tuple[int, int, int]
    ties: Tuple[Fraction, Fraction]


def br_intervals(game: Game) -> Dict[int, Optional[Tuple[Fraction, Fraction]]]:
    """For m = 2: the interval of p with j a best response to (p, 1 - p), or None"""
    if game.m != 2:
        raise UnsupportedShapeError(f"Best-response intervals need m=2, got m={game.m}")
    intervals = {}
    for j in range(game.n):
        lo, hi = ZERO, ONE
        for k in range(game.n):
            if k == j:
                continue
            # p * slope + offset >= 0
            slope = game.u_L[0][j] - game.u_L[1][j] - game.u_L[0][k] + game.u_L[1][k]
            offset = game.u_L[1][j] - game.u_L[1][k]
            if slope > 0:
                lo = max(lo, -offset / slope)
            elif slope < 0:
                hi = min(hi, -offset / slope)
            elif offset < 0:
                lo, hi = ONE, ZERO
        intervals[j] = (lo, hi) if lo <= hi else None
    return intervals


def cone_structure(game: Game) -> ConeStructure:
    if (game.m, game.n) != (2, 3):
        raise UnsupportedShapeError(f"Mean-based menus are built for 2x3 games, got {game.m}x{game.n}")
    intervals = br_intervals(game)
    if any(interval is None or interval[0] >= interval[1] for interval in intervals.values()):
        raise StructureError("Every learner action needs a best-response cone with nonempty interior")
    order = tuple(sorted(range(3), key=lambda j: intervals[j][1], reverse=True))
    first, middle, last = (intervals[j] for j in order)
    if not (first[1] == ONE and first[0] == middle[1] and middle[0] == last[1] and last[0] == ZERO):
        raise StructureError("Best-response cones do not tile the optimizer simplex in order")
    return ConeStructure(order=order, ties=(first[0], middle[0]))


def boundary_rays(game: Game) -> List[BoundaryRay]:
    """The two rays of cumulative states where adjacent learner actions tie"""
    structure = cone_structure(game)
    first, middle, last = structure.order
    rays = []
    for pair, p in (((first, middle), structure.ties[0]), ((middle, last), structure.ties[1])):
        rays.append(BoundaryRay(actions=tuple(sorted(pair)), direction=(p, ONE - p)))
    return rays


# ============================================================================
# FINGERPRINTS
# ============================================================================

def enumerate_fingerprints(game: Game) -> List[Fingerprint]:
    """All action sequences of length 1-3 without repeats, plain and on every compatible ray"""
    rays = boundary_rays(game)
    fingerprints = []
    for length in (1, 2, 3):
        for actions in itertools.product(range(game.n), repeat=length):
            if any(a == b for a, b in zip(actions, actions[1:])):
                continue
            fingerprints.append(Fingerprint(actions=actions))
            for ray in rays:
                if actions[0] in ray.actions and actions[-1] in ray.actions:
                    fingerprints.append(
                        Fingerprint(actions=actions, kind=TrajectoryKind.SPIRAL, spiral_ray=ray.actions)
                    )
    return fingerprints


def _ray_direction(game: Game, pair: Tuple[int, int]) -> Vector:
    for ray in boundary_rays(game):
        if ray.actions == tuple(pair):
            return ray.direction
    raise StructureError(f"No boundary ray between actions {pair}")


def fingerprint_system(game: Game, fingerprint: Fingerprint) -> HalfspaceSystem:
    """
    Constraints on segment masses y_1..y_k (2 coordinates each) and, for
    spirals, the offset scale s (last coordinate): X_i = s d + y_1 + ... + y_i
    """
    k = len(fingerprint.actions)
    spiral = fingerprint.kind == TrajectoryKind.SPIRAL
    direction = _ray_direction(game, fingerprint.spiral_ray) if spiral else None
    dim = 2 * k + (1 if spiral else 0)

    def state(i: int) -> List[List[Fraction]]:
        """Coefficients of the two coordinates of X_i"""
        coords = []
        for c in range(2):
            coeffs = [ZERO] * dim
            for seg in range(i):
                coeffs[2 * seg + c] = ONE
            if spiral:
                coeffs[2 * k] = direction[c]
            coords.append(coeffs)
        return coords

    def in_cone(i: int, b: int) -> List[Tuple[Vector, Fraction]]:
        X = state(i)
        rows = []
        for normal, _ in cone_rows(game, b):
            rows.append((tuple(normal[0] * a + normal[1] * c for a, c in zip(X[0], X[1])), ZERO))
        return rows

    rows = [(neg(unit(dim, v)), ZERO) for v in range(dim)]
    for i, b in enumerate(fingerprint.actions, start=1):
        if i > 1 or spiral:
            rows.extend(in_cone(i - 1, b))
        rows.extend(in_cone(i, b))

    total_mass = tuple(ONE if v < 2 * k else ZERO for v in range(dim))
    equalities = [(total_mass, ONE)]
    if spiral:
        a, b = fingerprint.spiral_ray
        # the accumulated mass lies on the closing ray: u_L(., a) = u_L(., b)
        tie = [ZERO] * dim
        for seg in range(k):
            for c in range(2):
                tie[2 * seg + c] = game.u_L[c][a] - game.u_L[c][b]
        equalities.append((tuple(tie), ZERO))
    return HalfspaceSystem(dim=dim, rows=tuple(rows), equalities=tuple(equalities))


def _profile_image(game: Game, fingerprint: Fingerprint, y: Sequence[Fraction]) -> Vector:
    probs = [ZERO] * game.dim
    for seg, b in enumerate(fingerprint.actions):
        for c in range(2):
            probs[game.index(c, b)] += y[2 * seg + c]
    return tuple(probs)


def fingerprint_vertices(game: Game, fingerprint: Fingerprint) -> List[Tuple[Vector, MBWitness]]:
    """Profile images of the fingerprint polytope's vertices, each with its LP witness"""
    system = fingerprint_system(game, fingerprint)
    spiral = fingerprint.kind == TrajectoryKind.SPIRAL
    k = len(fingerprint.actions)
    projected = eliminate_variable(system, 2 * k) if spiral else system
    try:
        polytope = enumerate_vertices(projected)
    except EmptyPolytopeError:
        logger.debug(f"Fingerprint {fingerprint.label} is infeasible")
        return []

    direction = _ray_direction(game, fingerprint.spiral_ray) if spiral else None
    images = []
    for y in polytope.vertices:
        s = ZERO
        if spiral:
            low, _ = variable_interval(system, 2 * k, y)
            s = low if low is not None else ZERO
        witness = MBWitness(fingerprint=fingerprint, y=y, s=s, ray_direction=direction)
        images.append((_profile_image(game, fingerprint, y), witness))
    return images


def fingerprint_polytope(game: Game, fingerprint: Fingerprint) -> Polytope:
    """Hull of the fingerprint's realizable profiles; empty when its system is infeasible"""
    images = fingerprint_vertices(game, fingerprint)
    if not images:
        return Polytope(dim=game.dim, vertices=())
    return convex_hull(image for image, _ in images)


def _fingerprint_extremes(game: Game, fingerprint: Fingerprint) -> List[Tuple[Vector, MBWitness]]:
    images = fingerprint_vertices(game, fingerprint)
    if not images:
        return []
    keep = set(convex_hull(image for image, _ in images).vertices)
    seen = {}
    for image, witness in images:
        if image in keep and image not in seen:
            seen[image] = witness
    return list(seen.items())


def build_mb_menu(game: Game, jobs: Optional[int] = None) -> Menu:
    """Hull of every fingerprint polytope, with a witness per vertex"""
    fingerprints = enumerate_fingerprints(game)
    logger.info(
        f"Solving {len(fingerprints)} fingerprint systems",
        extra={"game": game.name, "fingerprints": len(fingerprints)},
    )
    batches = parallel_map(partial(_fingerprint_extremes, game), fingerprints, jobs=jobs)

    witnesses: Dict[Vector, MBWitness] = {}
    for batch in batches:
        for image, witness in batch:
            witnesses.setdefault(image, witness)
    polytope = convex_hull(witnesses)
    menu = Menu(
        polytope=polytope,
        game=game,
        label="M_MB",
        witnesses={v: witnesses[v] for v in polytope.vertices},
    )
    logger.info("Built M_MB", extra={"game": game.name, "vertices": len(polytope.vertices)})
    return menu


def mb_nr_gap_witness(game: Game, nr: Menu, mb: Menu) -> Optional[Vector]:
    """A vertex of the no-regret menu outside the mean-based menu, if any"""
    for v in nr.vertices:
        if not contains_point(mb.polytope, v):
            return v
    return None


# ============================================================================
# WITNESS TRAJECTORIES
# ============================================================================

def witness_trajectory(witness: MBWitness) -> Trajectory:
    """Trajectory realizing a fingerprint LP vertex; zero-mass segments are dropped"""
    segments = []
    for seg, b in enumerate(witness.fingerprint.actions):
        mass = witness.y[2 * seg: 2 * seg + 2]
        t = sum(mass, ZERO)
        if t > 0:
            segments.append(Segment(x=tuple(v / t for v in mass), t=t, b=b))
    if witness.s > 0:
        return Trajectory(
            segments=tuple(segments),
            kind=TrajectoryKind.SPIRAL,
            X0=scale(witness.s, witness.ray_direction),
        )
    return Trajectory(segments=tuple(segments))


def vertex_witness(menu: Menu, vertex: Sequence) -> Trajectory:
    key = tuple(Fraction(v) for v in vertex)
    if key not in menu.witnesses:
        raise InputError(f"Menu {menu.label} has no witness for this vertex")
    return witness_trajectory(menu.witnesses[key])


def unroll_spiral(game: Game, trajectory: Trajectory, cycles: int) -> Trajectory:
    """
    Plain trajectory: a segment reaching X0, then `cycles` copies of the loop,
    copy c scaled by lambda^c where lambda = |X_k| / |X0|
    """
    if trajectory.kind != TrajectoryKind.SPIRAL:
        return trajectory
    if cycles < 1:
        raise InputError(f"cycles must be positive, got {cycles}")
    _check_shape(game, trajectory)
    start = trajectory.X0
    radius = sum(start, ZERO)
    ratio = (radius + trajectory.total_duration) / radius
    first = trajectory.segments[0].b
    segments = [Segment(x=tuple(v / radius for v in start), t=radius, b=first)]
    factor = ONE
    for _ in range(cycles):
        segments.extend(Segment(x=s.x, t=s.t * factor, b=s.b) for s in trajectory.segments)
        factor *= ratio
    return Trajectory(segments=tuple(segments))


# ============================================================================
# GENERATORS
# ============================================================================

def generalized_counterexample(game: Game) -> Trajectory:
    """
    Two segments: the mix at the middle/last tie played while the learner
    takes the last action, then optimizer action 0 against the middle action,
    with durations ending exactly on the first/middle tie.
    """
    structure = cone_structure(game)
    first, middle, last = structure.order
    p_star, q_star = structure.ties
    t1 = (ONE - p_star) / (ONE - q_star)
    t2 = ONE - t1
    return Trajectory(
        segments=(
            Segment(x=(q_star, ONE - q_star), t=t1, b=last),
            Segment(x=(ONE, ZERO), t=t2, b=middle),
        )
    )


def _pick_direction(rng: np.random.Generator, lo: Fraction, hi: Fraction) -> Fraction:
    if rng.random() < 0.5:
        return lo if rng.random() < 0.5 else hi
    return lo + (hi - lo) * Fraction(int(rng.integers(0, 21)), 20)


def random_valid_trajectory(game: Game, rng: np.random.Generator, max_segments: int = 4) -> Trajectory:
    """
    Random valid plain trajectory for a game with two optimizer actions

    Each segment keeps the learner on a current best response and ends at a
    state whose direction lies in that action's cone, often on its boundary so
    the next segment can switch.
    """
    intervals = br_intervals(game)
    usable = [j for j, interval in intervals.items() if interval is not None]
    X = (ZERO, ZERO)
    segments: List[Segment] = []
    for _ in range(int(rng.integers(1, max_segments + 1))):
        candidates = usable if not segments else sorted(argmax_actions(learner_payoffs(game, X)))
        b = candidates[int(rng.integers(len(candidates)))]
        lo, hi = intervals[b]
        total = X[0] + X[1]

        chosen = None
        for attempt in range(10):
            p = _pick_direction(rng, lo, hi) if attempt < 9 else (lo + hi) / 2
            if (p == 0 and X[0] > 0) or (p == 1 and X[1] > 0):
                continue
            need = total
            if p > 0:
                need = max(need, X[0] / p)
            if p < 1:
                need = max(need, X[1] / (1 - p))
            chosen = (p, need + Fraction(int(rng.integers(1, 11)), 10))
            break
        if chosen is None:
            break
        p, new_total = chosen
        new_state = (new_total * p, new_total * (1 - p))
        t = new_total - total
        x = ((new_state[0] - X[0]) / t, (new_state[1] - X[1]) / t)
        segments.append(Segment(x=x, t=t, b=b))
        X = new_state
    return Trajectory(segments=tuple(segments))


# ============================================================================
# DISCRETIZATION
# ============================================================================

def _perturbation_weights(game: Game, actions: Sequence[int], mixes: Sequence[Vector]) -> List[int]:
    """Powers of two so the running perturbation mass strictly favors each segment's action"""
    weights: List[int] = []
    running = (ZERO,) * game.m
    for b, z in zip(actions, mixes):
        w = weights[-1] if weights else 1
        while True:
            candidate = tuple(r + w * v for r, v in zip(running, z))
            payoffs = learner_payoffs(game, candidate)
            if argmax_actions(payoffs) == frozenset({b}):
                break
            w *= 2
            if w > 2 ** 64:
                raise AssumptionViolationError(f"Cannot make action {b} strictly preferred")
        weights.append(w)
        running = tuple(r + w * v for r, v in zip(running, z))
    return weights


def discretize_runs(game: Game, trajectory: Trajectory, T: int, epsilon=ZERO) -> List[ScheduleRun]:
    """
    Finite schedule for horizon T: segment i gets floor(t_i T) rounds (durations
    normalized to total 1), of which a prefix of perturbation rounds plays a mix
    strictly incentivizing b_i. Perturbation rounds total at most floor(epsilon T).
    """
    if trajectory.kind != TrajectoryKind.PLAIN:
        raise PreconditionError("Spirals must be unrolled before discretization")
    if T < 1:
        raise InputError(f"Horizon must be positive, got {T}")
    epsilon = Fraction(epsilon)
    if not ZERO <= epsilon < ONE:
        raise InputError(f"epsilon must lie in [0, 1), got {epsilon}")
    check = validate_trajectory(game, trajectory)
    if not check.valid:
        raise PreconditionError(f"Trajectory is not valid: {check.detail}")

    total = trajectory.total_duration
    budgets = [int(segment.t * T / total) for segment in trajectory.segments]
    perturbation = [0] * len(budgets)
    mixes: List[Vector] = []
    P = int(epsilon * T)
    if P > 0:
        actions = [segment.b for segment in trajectory.segments]
        for b in actions:
            margin, z = incentive_margin(game, b)
            if margin <= 0:
                raise AssumptionViolationError(f"No mix strictly incentivizes action {game.learner_label(b)}")
            mixes.append(z)
        weights = _perturbation_weights(game, actions, mixes)
        total_weight = sum(weights)
        perturbation = [min(P * w // total_weight, budget) for w, budget in zip(weights, budgets)]

    runs: List[ScheduleRun] = []
    for i, segment in enumerate(trajectory.segments):
        if perturbation[i] > 0:
            runs.append(ScheduleRun(x=mixes[i], rounds=perturbation[i]))
        if budgets[i] - perturbation[i] > 0:
            runs.append(ScheduleRun(x=segment.x, rounds=budgets[i] - perturbation[i]))
    return runs


def discretize(game: Game, trajectory: Trajectory, T: int, epsilon=ZERO) -> List[Vector]:
    """Per-round optimizer mixes of discretize_runs (length at most T)"""
    mixes: List[Vector] = []
    for run in discretize_runs(game, trajectory, T, epsilon):
        mixes.extend([run.x] * run.rounds)
    return mixes

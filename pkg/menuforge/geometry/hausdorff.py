"""
Hausdorff diagnostics (floating point)

Distances between menus are reported as floats only; no exact decision ever
depends on them. Distance from a point to conv(V) is found with away-step
Frank-Wolfe on the barycentric weights.
"""

import logging
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from menuforge.core.config import settings
from menuforge.core.exceptions import RepresentationError
from menuforge.geometry.models import Polytope


logger = logging.getLogger(__name__)


def vertex_array(polytope: Polytope) -> np.ndarray:
    if polytope.vertices is None:
        raise RepresentationError("Hausdorff distance needs vertex representations")
    if not polytope.vertices:
        raise RepresentationError("Hausdorff distance is undefined for an empty polytope")
    return np.array([[float(c) for c in v] for v in polytope.vertices], dtype=float)


def project_onto_hull(
    point: np.ndarray,
    V: np.ndarray,
    weights: Optional[np.ndarray] = None,
    tolerance: Optional[float] = None,
    max_iterations: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Euclidean projection of point onto conv(rows of V)

    Returns (projection, barycentric weights). ``weights`` warm-starts the
    iteration; otherwise it starts at the nearest vertex.
    """
    tol = settings.HAUSDORFF_TOLERANCE if tolerance is None else tolerance
    iterations = settings.HAUSDORFF_MAX_ITERATIONS if max_iterations is None else max_iterations

    if weights is None:
        lam = np.zeros(len(V))
        lam[int(np.argmin(((V - point) ** 2).sum(axis=1)))] = 1.0
    else:
        lam = weights.copy()
    x = lam @ V

    for _ in range(iterations):
        residual = x - point
        grad = V @ residual
        s = int(np.argmin(grad))
        gap = float(grad @ lam - grad[s])
        if gap <= tol:
            break
        active = np.flatnonzero(lam > 0)
        a = int(active[np.argmax(grad[active])])
        fw_dir = V[s] - x
        away_dir = x - V[a]
        if -residual @ fw_dir >= -residual @ away_dir or lam[a] >= 1.0:
            direction, step_max, toward = fw_dir, 1.0, True
        else:
            direction, step_max, toward = away_dir, lam[a] / (1.0 - lam[a]), False
        denom = float(direction @ direction)
        if denom <= 0.0:
            break
        step = min(step_max, max(0.0, float(-residual @ direction) / denom))
        if toward:
            lam *= 1.0 - step
            lam[s] += step
        else:
            lam *= 1.0 + step
            lam[a] -= step
        lam[lam < 1e-15] = 0.0
        lam /= lam.sum()
        x = lam @ V
    return x, lam


def point_distance(point: Sequence[float], polytope: Polytope) -> float:
    V = vertex_array(polytope)
    p = np.asarray(point, dtype=float)
    projection, _ = project_onto_hull(p, V)
    return float(np.linalg.norm(projection - p))


def directed_distance(points: Iterable[Sequence[float]], polytope: Polytope) -> float:
    """max over the given points of their distance to the polytope"""
    V = vertex_array(polytope)
    worst = 0.0
    for point in points:
        p = np.asarray([float(c) for c in point], dtype=float)
        projection, _ = project_onto_hull(p, V)
        worst = max(worst, float(np.linalg.norm(projection - p)))
    return worst


def hausdorff_distance(P: Polytope, Q: Polytope) -> float:
    """max of the two directed vertex-to-polytope distances (exact for compact convex sets)"""
    if P.dim != Q.dim:
        raise RepresentationError(f"Polytopes of dimension {P.dim} and {Q.dim}")
    value = max(directed_distance(P.require_vertices(), Q), directed_distance(Q.require_vertices(), P))
    logger.debug(f"Hausdorff distance {value:.3e}")
    return value

"""Trajectory Domain V1 - segments, trajectories, fingerprints"""

from .models import (
    TrajectoryKind,
    Segment,
    Trajectory,
    TrajectoryCheck,
    BoundaryRay,
    Fingerprint,
    MBWitness,
)

__all__ = [
    "TrajectoryKind",
    "Segment",
    "Trajectory",
    "TrajectoryCheck",
    "BoundaryRay",
    "Fingerprint",
    "MBWitness",
]

"""
Trajectory Models (Version 1)

Continuous-time play against a mean-based learner: segments of
(optimizer mix, duration, learner action), optionally started from an
offset state (spirals).
"""

from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from menuforge.core.exceptions import InputError
from menuforge.geometry.rational import Vector, ZERO, add, as_vector, is_distribution, scale, to_rational, zeros


class TrajectoryKind(str, Enum):
    PLAIN = "plain"
    SPIRAL = "spiral"


# ============================================================================
# SEGMENTS AND TRAJECTORIES
# ============================================================================

class Segment(BaseModel):
    """Optimizer plays mix x for duration t while the learner best-responds with b"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: Vector = Field(..., description="Optimizer mix over its m actions")
    t: Fraction = Field(..., description="Positive duration")
    b: int = Field(..., ge=0, description="Learner action index")

    @field_validator("x", mode="before")
    @classmethod
    def coerce_mix(cls, v):
        return as_vector(v)

    @field_validator("t", mode="before")
    @classmethod
    def coerce_duration(cls, v):
        return to_rational(v)

    @model_validator(mode="after")
    def check_segment(self) -> "Segment":
        if not is_distribution(self.x):
            raise ValueError("segment mix must be a distribution")
        if self.t <= 0:
            raise ValueError(f"segment duration must be positive, got {self.t}")
        return self

    @property
    def mass(self) -> Vector:
        return scale(self.t, self.x)


class Trajectory(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    segments: Tuple[Segment, ...] = Field(..., min_length=1)
    kind: TrajectoryKind = TrajectoryKind.PLAIN
    X0: Optional[Vector] = Field(None, description="Offset start state (spirals only)")

    @field_validator("X0", mode="before")
    @classmethod
    def coerce_start(cls, v):
        return None if v is None else as_vector(v)

    @model_validator(mode="after")
    def check_kind(self) -> "Trajectory":
        m = len(self.segments[0].x)
        if any(len(s.x) != m for s in self.segments):
            raise ValueError("all segment mixes must have the same dimension")
        if self.kind == TrajectoryKind.SPIRAL:
            if self.X0 is None or len(self.X0) != m:
                raise ValueError("a spiral needs an offset start X0 of the optimizer dimension")
            if any(v < 0 for v in self.X0) or not any(self.X0):
                raise ValueError("X0 must be nonnegative and nonzero")
        elif self.X0 is not None:
            raise ValueError("a plain trajectory starts at the zero state; X0 must be absent")
        return self

    @classmethod
    def build(cls, segments, kind: TrajectoryKind = TrajectoryKind.PLAIN, X0=None) -> "Trajectory":
        try:
            return cls(segments=tuple(segments), kind=kind, X0=X0)
        except ValidationError as e:
            raise InputError(f"Invalid trajectory: {e}") from e

    @property
    def m(self) -> int:
        return len(self.segments[0].x)

    @property
    def start(self) -> Vector:
        return self.X0 if self.X0 is not None else zeros(self.m)

    @property
    def total_duration(self) -> Fraction:
        return sum((s.t for s in self.segments), ZERO)

    def states(self) -> List[Vector]:
        """Cumulative states X_0, X_1, ..., X_k"""
        states = [self.start]
        for segment in self.segments:
            states.append(add(states[-1], segment.mass))
        return states

    def scaled(self, factor: Fraction) -> "Trajectory":
        """Every duration (and the offset start) multiplied by factor"""
        return Trajectory(
            segments=tuple(Segment(x=s.x, t=s.t * factor, b=s.b) for s in self.segments),
            kind=self.kind,
            X0=None if self.X0 is None else scale(factor, self.X0),
        )


class TrajectoryCheck(BaseModel):
    """Result of validate_trajectory; segment and condition locate the first violation"""

    valid: bool
    segment: Optional[int] = Field(None, description="1-based index of the failing segment")
    condition: Optional[str] = Field(None, description="'start' or 'end' best-response condition")
    detail: Optional[str] = None


# ============================================================================
# FINGERPRINTS
# ============================================================================

class BoundaryRay(BaseModel):
    """Ray of cumulative states where two adjacent learner actions tie"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    actions: Tuple[int, int]
    direction: Vector = Field(..., description="Point of the ray on the optimizer simplex")


class Fingerprint(BaseModel):
    model_config = ConfigDict(frozen=True)

    actions: Tuple[int, ...] = Field(..., min_length=1, max_length=3)
    kind: TrajectoryKind = TrajectoryKind.PLAIN
    spiral_ray: Optional[Tuple[int, int]] = Field(None, description="Learner actions tied on the closing ray")

    @model_validator(mode="after")
    def check_actions(self) -> "Fingerprint":
        for a, b in zip(self.actions, self.actions[1:]):
            if a == b:
                raise ValueError(f"consecutive segments repeat action {a}")
        if self.kind == TrajectoryKind.SPIRAL:
            if self.spiral_ray is None:
                raise ValueError("a spiral fingerprint needs its closing ray")
            if self.actions[0] not in self.spiral_ray or self.actions[-1] not in self.spiral_ray:
                raise ValueError("a spiral must start and end with actions of its closing ray")
        elif self.spiral_ray is not None:
            raise ValueError("plain fingerprints carry no ray")
        return self

    @property
    def label(self) -> str:
        text = "-".join(str(a) for a in self.actions)
        if self.kind == TrajectoryKind.SPIRAL:
            text += f"@{self.spiral_ray[0]}{self.spiral_ray[1]}"
        return text


class MBWitness(BaseModel):
    """LP vertex of a fingerprint system: segment masses y (flattened) and offset scale s"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    fingerprint: Fingerprint
    y: Vector
    s: Fraction = ZERO
    ray_direction: Optional[Vector] = None

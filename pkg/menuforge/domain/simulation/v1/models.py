"""
Simulation Models (Version 1)

Learner and optimizer specifications for the repeated-game simulator and
the transcript it produces. Specs are plain data; services/learners.py and
services/optimizers.py turn them into stateful players.
"""

from enum import Enum
from fractions import Fraction
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from menuforge.core.config import settings
from menuforge.domain.games.v1 import CSP, Game
from menuforge.domain.menus.v1 import Menu
from menuforge.domain.trajectories.v1 import Trajectory
from menuforge.geometry.rational import Vector, ZERO, as_vector, is_distribution, rationalize, to_rational


# ============================================================================
# ENUMS
# ============================================================================

class LearnerKind(str, Enum):
    FTRL = "ftrl"
    FTL = "ftl"
    SWAP_REGRET = "swap_regret"
    BLACKWELL = "blackwell"
    PROTOCOL = "protocol"
    # History-independent and trigger fixtures
    CONSTANT = "constant"
    FIXED_MIX = "fixed_mix"
    ALTERNATING = "alternating"
    GRIM_TRIGGER = "grim_trigger"
    UNIFORM = "uniform"


OBLIVIOUS_KINDS = {LearnerKind.CONSTANT, LearnerKind.FIXED_MIX, LearnerKind.ALTERNATING, LearnerKind.UNIFORM}


class Regularizer(str, Enum):
    NEGENTROPY = "negentropy"
    QUADRATIC = "quadratic"


class EtaKind(str, Enum):
    SQRT_LOG = "sqrt_log"
    INV_SQRT = "inv_sqrt"
    POWER = "power"


class AuditMode(str, Enum):
    HORIZON = "horizon"
    AVERAGE = "average"


class OptimizerKind(str, Enum):
    FIXED = "fixed"
    SCHEDULE = "schedule"
    TRAJECTORY = "trajectory"
    EXPLOITER = "exploiter"
    RANDOM = "random"
    COOPERATIVE = "cooperative"


# ============================================================================
# RATES
# ============================================================================

class EtaSchedule(BaseModel):
    """FTRL learning rate as a function of the horizon T"""

    kind: EtaKind = EtaKind.SQRT_LOG
    scale: float = Field(1.0, gt=0)
    exponent: Optional[float] = Field(None, gt=0, lt=1)

    @model_validator(mode="after")
    def check_exponent(self) -> "EtaSchedule":
        if self.kind == EtaKind.POWER and self.exponent is None:
            raise ValueError("power schedule needs an exponent")
        return self

    def value(self, T: int, n: int) -> float:
        if self.kind == EtaKind.SQRT_LOG:
            return self.scale * float(np.sqrt(np.log(max(n, 2)) / T))
        if self.kind == EtaKind.INV_SQRT:
            return self.scale / float(np.sqrt(T))
        return self.scale * float(T) ** (-self.exponent)

    @classmethod
    def default_for(cls, regularizer: "Regularizer") -> "EtaSchedule":
        if regularizer == Regularizer.QUADRATIC:
            return cls(kind=EtaKind.INV_SQRT)
        return cls(kind=EtaKind.SQRT_LOG)


class GammaRate(BaseModel):
    """gamma(t) = scale * t^(-exponent), the mean-based threshold"""

    exponent: float = Field(0.25, gt=0, lt=1)
    scale: float = Field(1.0, gt=0)

    def value(self, t: float) -> float:
        return self.scale * float(t) ** (-self.exponent)


# ============================================================================
# SPECS
# ============================================================================

class LearnerSpec(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: LearnerKind
    regularizer: Optional[Regularizer] = None
    eta: Optional[EtaSchedule] = None
    target_menu: Optional[Menu] = Field(None, description="Blackwell target or protocol extension menu")
    base: Optional["LearnerSpec"] = Field(None, description="Fallback learner of the protocol")
    horizon: Optional[int] = Field(None, ge=1, description="Horizon the protocol was built for")
    action: Optional[int] = Field(None, ge=0, description="Constant action")
    mix: Optional[Vector] = Field(None, description="Fixed learner mix")
    actions: Optional[List[int]] = Field(None, description="Alternating cycle, or [before, after] for grim trigger")
    trigger_action: Optional[int] = Field(None, ge=0, description="Optimizer action that fires the grim trigger")
    gamma_audit: Optional[GammaRate] = None

    @field_validator("mix", mode="before")
    @classmethod
    def coerce_mix(cls, v):
        return None if v is None else as_vector(v)

    @model_validator(mode="after")
    def check_kind_fields(self) -> "LearnerSpec":
        kind = self.kind
        if kind == LearnerKind.FTRL and (self.regularizer is None or self.eta is None):
            raise ValueError("ftrl needs a regularizer and an eta schedule")
        if kind in (LearnerKind.BLACKWELL, LearnerKind.PROTOCOL) and self.target_menu is None:
            raise ValueError(f"{kind.value} needs a target menu")
        if kind == LearnerKind.PROTOCOL and self.base is None:
            raise ValueError("protocol needs a base learner")
        if kind == LearnerKind.CONSTANT and self.action is None:
            raise ValueError("constant learner needs an action")
        if kind == LearnerKind.FIXED_MIX and (self.mix is None or not is_distribution(self.mix)):
            raise ValueError("fixed_mix learner needs a distribution")
        if kind == LearnerKind.ALTERNATING and not self.actions:
            raise ValueError("alternating learner needs a nonempty action cycle")
        if kind == LearnerKind.GRIM_TRIGGER and (
            self.actions is None or len(self.actions) != 2 or self.trigger_action is None
        ):
            raise ValueError("grim trigger needs actions [before, after] and a trigger action")
        return self

    @classmethod
    def mw(cls, scale: float = 1.0) -> "LearnerSpec":
        """Multiplicative weights: FTRL with negentropy and eta = scale * sqrt(ln n / T)"""
        return cls(
            kind=LearnerKind.FTRL,
            regularizer=Regularizer.NEGENTROPY,
            eta=EtaSchedule(kind=EtaKind.SQRT_LOG, scale=scale),
        )


class ScheduleRun(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    x: Vector
    rounds: int = Field(..., ge=1)

    @field_validator("x", mode="before")
    @classmethod
    def coerce_mix(cls, v):
        return as_vector(v)

    @model_validator(mode="after")
    def check_mix(self) -> "ScheduleRun":
        if not is_distribution(self.x):
            raise ValueError("schedule mix must be a distribution")
        return self


class OptimizerSpec(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: OptimizerKind
    x: Optional[Vector] = Field(None, description="Fixed mix, or sampling distribution for random")
    rounds: Optional[List[ScheduleRun]] = Field(None, description="Runs in order; the last run repeats to T")
    trajectory: Optional[Trajectory] = None
    epsilon: Fraction = Field(ZERO, description="Perturbation budget when discretizing a trajectory")
    uO: Optional[Vector] = Field(None, description="Optimizer payoff for the exploiter")
    target: Optional[Vector] = Field(None, description="CSP the cooperative optimizer signals to a protocol learner")

    @field_validator("x", "uO", "target", mode="before")
    @classmethod
    def coerce_vectors(cls, v):
        return None if v is None else as_vector(v)

    @field_validator("epsilon", mode="before")
    @classmethod
    def coerce_epsilon(cls, v):
        return to_rational(v)

    @model_validator(mode="after")
    def check_kind_fields(self) -> "OptimizerSpec":
        kind = self.kind
        if kind in (OptimizerKind.FIXED, OptimizerKind.RANDOM) and (self.x is None or not is_distribution(self.x)):
            raise ValueError(f"{kind.value} optimizer needs a distribution x")
        if kind == OptimizerKind.SCHEDULE and not self.rounds:
            raise ValueError("schedule optimizer needs at least one run")
        if kind == OptimizerKind.TRAJECTORY and self.trajectory is None:
            raise ValueError("trajectory optimizer needs a trajectory")
        if kind == OptimizerKind.EXPLOITER and self.uO is None:
            raise ValueError("exploiter needs an optimizer payoff uO")
        if kind == OptimizerKind.COOPERATIVE and (self.target is None or not is_distribution(self.target)):
            raise ValueError("cooperative optimizer needs a target CSP")
        if not ZERO <= self.epsilon < 1:
            raise ValueError("epsilon must lie in [0, 1)")
        return self


# ============================================================================
# TRANSCRIPT
# ============================================================================

class Transcript(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    T: int = Field(..., ge=1)
    optimizer_mixes: np.ndarray = Field(..., description="T x m array of optimizer mixes")
    learner_mixes: np.ndarray = Field(..., description="T x n array of learner mixes")
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)

    @model_validator(mode="after")
    def check_rows(self) -> "Transcript":
        for label, rows in (("optimizer", self.optimizer_mixes), ("learner", self.learner_mixes)):
            if rows.ndim != 2 or rows.shape[0] != self.T:
                raise ValueError(f"{label} mixes must have T={self.T} rows")
            if np.any(rows < -1e-12) or np.any(np.abs(rows.sum(axis=1) - 1.0) > 1e-12):
                raise ValueError(f"{label} mixes must be distributions")
        return self


class EmpiricalCSP(BaseModel):
    """Time-averaged outer products of a transcript (float), with exact rounding on demand"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    m: int
    n: int
    values: np.ndarray

    def to_csp(self, game: Game, denominator: Optional[int] = None) -> CSP:
        d = denominator or settings.FLOAT_RATIONAL_DENOMINATOR
        probs = [rationalize(float(v), d) for v in self.values]
        probs = [max(p, ZERO) for p in probs]
        # the largest entry absorbs the rounding remainder
        top = int(np.argmax(self.values))
        probs[top] += 1 - sum(probs, ZERO)
        return CSP.of(game, probs)

    def l1_distance(self, point) -> float:
        return float(np.abs(self.values - np.asarray([float(v) for v in point])).sum())

    def linf_distance(self, point) -> float:
        return float(np.abs(self.values - np.asarray([float(v) for v in point])).max())


LearnerSpec.model_rebuild()

"""
Game Models (Version 1)

Bimatrix games with exact payoffs, correlated strategy profiles, and the
validation report for the genericity assumptions menus rely on.

Key Principles:
1. Payoffs are exact Fractions in [-1, 1]
2. Rows are optimizer actions (m), columns are learner actions (n)
3. CSPs are flattened row-major: index (i, j) -> i * n + j
4. Models are frozen; derived quantities live in services
"""

from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from menuforge.core.exceptions import InputError
from menuforge.geometry.rational import Vector, as_vector, format_vector, is_distribution, ONE


Matrix = Tuple[Tuple[Fraction, ...], ...]


def _as_matrix(value) -> Matrix:
    if value is None:
        return None
    try:
        return tuple(as_vector(row) for row in value)
    except TypeError as e:
        raise ValueError(f"Payoff matrix must be a list of rows: {e}") from e


# ============================================================================
# GAME
# ============================================================================

class Game(BaseModel):
    """A two-player bimatrix game; u_L is the learner's payoff, u_O the optimizer's"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int = Field(..., ge=1, description="Number of optimizer actions")
    n: int = Field(..., ge=1, description="Number of learner actions")
    u_L: Matrix = Field(..., description="Learner payoffs, m rows by n columns")
    u_O: Optional[Matrix] = Field(None, description="Optimizer payoffs, same shape")
    name: Optional[str] = Field(None, description="Corpus name")
    optimizer_actions: Optional[Tuple[str, ...]] = Field(None, description="Labels for optimizer actions")
    learner_actions: Optional[Tuple[str, ...]] = Field(None, description="Labels for learner actions")

    @field_validator("u_L", "u_O", mode="before")
    @classmethod
    def coerce_matrix(cls, v):
        return _as_matrix(v)

    @model_validator(mode="after")
    def check_shape_and_range(self) -> "Game":
        for label, matrix in (("u_L", self.u_L), ("u_O", self.u_O)):
            if matrix is None:
                continue
            if len(matrix) != self.m or any(len(row) != self.n for row in matrix):
                raise ValueError(f"{label} must be {self.m}x{self.n}")
            for row in matrix:
                for v in row:
                    if not -ONE <= v <= ONE:
                        raise ValueError(f"{label} entry {v} outside [-1, 1]")
        for label, names, size in (
            ("optimizer_actions", self.optimizer_actions, self.m),
            ("learner_actions", self.learner_actions, self.n),
        ):
            if names is not None and len(names) != size:
                raise ValueError(f"{label} needs {size} labels")
        return self

    @classmethod
    def build(cls, u_L, u_O=None, **kwargs) -> "Game":
        """Construct from nested lists of rationals; malformed input raises InputError"""
        try:
            rows = list(u_L)
            return cls(m=len(rows), n=len(rows[0]) if rows else 0, u_L=rows, u_O=u_O, **kwargs)
        except ValidationError as e:
            raise InputError(f"Invalid game: {e}") from e

    # ------------------------------------------------------------------
    # Derived indexing helpers
    # ------------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.m * self.n

    def index(self, i: int, j: int) -> int:
        return i * self.n + j

    def pair(self, index: int) -> Tuple[int, int]:
        return divmod(index, self.n)

    @property
    def flat_u_L(self) -> Vector:
        return tuple(v for row in self.u_L for v in row)

    @property
    def flat_u_O(self) -> Optional[Vector]:
        if self.u_O is None:
            return None
        return tuple(v for row in self.u_O for v in row)

    def optimizer_label(self, i: int) -> str:
        return self.optimizer_actions[i] if self.optimizer_actions else f"o{i}"

    def learner_label(self, j: int) -> str:
        return self.learner_actions[j] if self.learner_actions else f"l{j}"


# ============================================================================
# CSP
# ============================================================================

class CSP(BaseModel):
    """Correlated strategy profile: a distribution over (optimizer, learner) action pairs"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    probs: Vector = Field(..., description="Flattened row-major probabilities, length m*n")

    @field_validator("probs", mode="before")
    @classmethod
    def coerce_probs(cls, v):
        return as_vector(v)

    @model_validator(mode="after")
    def check_distribution(self) -> "CSP":
        if len(self.probs) != self.m * self.n:
            raise ValueError(f"CSP needs {self.m * self.n} entries, got {len(self.probs)}")
        if not is_distribution(self.probs):
            raise ValueError(f"CSP entries must be nonnegative and sum to 1: {format_vector(self.probs)}")
        return self

    @classmethod
    def of(cls, game: Game, probs: Sequence) -> "CSP":
        try:
            return cls(m=game.m, n=game.n, probs=probs)
        except ValidationError as e:
            raise InputError(f"Invalid CSP: {e}") from e

    def entry(self, i: int, j: int) -> Fraction:
        return self.probs[i * self.n + j]


CSPLike = Union[CSP, Sequence[Fraction]]


# ============================================================================
# VALIDATION REPORT
# ============================================================================

class ActionClass(str, Enum):
    """Dominance class of a learner action"""
    NON_DOMINATED = "non_dominated"
    WEAKLY_DOMINATED = "weakly_dominated"
    STRICTLY_DOMINATED = "strictly_dominated"


class ActionReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    action: int
    label: str
    action_class: ActionClass
    margin: Optional[Fraction] = Field(None, description="Optimal incentive margin; negative when never a best response")
    witness_x: Optional[Vector] = Field(None, description="Optimizer mix attaining the margin")


class ValidationReport(BaseModel):
    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        json_schema_extra={
            "example": {
                "game_name": "mb_counterexample",
                "valid": True,
                "phi_plus": [[1, 2]],
                "phi_plus_unique": True,
                "phi_plus_value": "1/2",
                "actions": [
                    {"action": 0, "label": "A", "action_class": "non_dominated", "margin": "1/6"},
                ],
                "violations": [],
            }
        },
    )

    game_name: Optional[str] = None
    valid: bool
    phi_plus: List[Tuple[int, int]] = Field(..., description="All learner-payoff maximizing pure pairs")
    phi_plus_unique: bool
    phi_plus_value: Fraction
    actions: List[ActionReport]
    violations: List[str] = Field(default_factory=list)


"""
Menu Models (Version 1)

A menu is a convex polytope of CSPs for one game. Reports produced by the
menu and Pareto services live here as well.
"""

from enum import Enum
from fractions import Fraction
from typing import Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from menuforge.domain.games.v1 import Game
from menuforge.domain.trajectories.v1 import MBWitness
from menuforge.geometry.models import Polytope
from menuforge.geometry.rational import Vector, is_distribution, format_vector


# ============================================================================
# MENU
# ============================================================================

class Menu(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    polytope: Polytope
    game: Game
    label: str = ""
    witnesses: Dict[Vector, MBWitness] = Field(
        default_factory=dict,
        description="Trajectory witness per vertex (mean-based menus only)",
    )

    @model_validator(mode="after")
    def check_vertices(self) -> "Menu":
        if self.polytope.dim != self.game.dim:
            raise ValueError(f"menu dimension {self.polytope.dim} does not match the game's {self.game.dim}")
        for v in self.polytope.vertices or ():
            if not is_distribution(v):
                raise ValueError(f"menu vertex {format_vector(v)} is not a CSP")
        return self

    @property
    def vertices(self):
        return self.polytope.require_vertices()

    def __contains__(self, point) -> bool:
        return point in self.polytope


class ValueFaces(BaseModel):
    """Max/min learner value of a menu and the faces attaining them"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    u_plus: Fraction
    u_minus: Fraction
    m_plus: Polytope
    m_minus: Polytope


class CheckReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    menu_label: str
    passed: bool
    grid_denominator: int
    points_checked: int
    failing_x: Optional[Vector] = None


# ============================================================================
# PARETO
# ============================================================================

class VerdictReason(str, Enum):
    MIN_FACE_MATCHES_NSR = "min_face_matches_nsr"
    MIN_FACE_STRICTLY_LARGER = "min_face_strictly_larger"
    NOT_NO_REGRET = "not_no_regret"
    MISSING_PHI_PLUS = "missing_phi_plus"
    NSR_NOT_CONTAINED = "nsr_not_contained"


class ParetoVerdict(BaseModel):
    model_config = ConfigDict(
        arbitrary_types_allowed=True,
        json_schema_extra={
            "example": {
                "menu_label": "M_NR",
                "optimal": False,
                "reason": "min_face_strictly_larger",
                "witness_vertex": ["1/3", "0/1", "0/1", "0/1", "1/3", "0/1", "0/1", "0/1", "1/3"],
            }
        },
    )

    menu_label: str = ""
    optimal: bool
    reason: VerdictReason
    witness_vertex: Optional[Vector] = None
    dominating_menu: Optional[Menu] = None

    @model_validator(mode="after")
    def check_consistency(self) -> "ParetoVerdict":
        if self.optimal != (self.reason == VerdictReason.MIN_FACE_MATCHES_NSR):
            raise ValueError(f"optimal={self.optimal} contradicts reason {self.reason.value}")
        return self


class SeparationWitness(BaseModel):
    """Optimizer payoff under which the winner menu gives the learner strictly more"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    uO: Vector = Field(..., description="Flattened optimizer payoff")
    vL_winner: Fraction
    vL_loser: Fraction
    direction: Vector = Field(..., description="Separating direction mixed with u_L")
    circle_parameter: Optional[Fraction] = Field(None, description="t of the circle point; None for -u_L")
    mirrored: bool = False
    separated_vertex: Vector

    @model_validator(mode="after")
    def check_strict(self) -> "SeparationWitness":
        if not self.vL_winner > self.vL_loser:
            raise ValueError("a separation witness needs a strict learner-value gap")
        return self


class DominanceAudit(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    candidate_label: str
    baseline_label: str
    samples: int
    wins: int
    ties: int
    losses: int
    seed: Optional[int] = None
    first_loss: Optional[Vector] = None

    @property
    def dominates(self) -> bool:
        return self.losses == 0 and self.wins > 0

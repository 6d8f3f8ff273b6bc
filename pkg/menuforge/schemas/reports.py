"""
CLI Report Schemas

Payloads the command line writes next to its artifacts.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


# ============================================================================
# MANIFEST
# ============================================================================

class FileDigest(BaseModel):
    path: str
    sha256: str


class RunManifest(BaseModel):
    """
    Everything needed to reproduce a command's outputs

    Exact computations reproduce byte-identical outputs from the same inputs.
    """

    command: str = Field(..., description="Command line that produced the outputs")
    inputs: List[FileDigest] = Field(default_factory=list)
    outputs: List[FileDigest] = Field(default_factory=list)
    versions: Dict[str, str] = Field(default_factory=dict, description="Tool and library versions")
    seed: Optional[int] = None

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "command": "menu build games/mb_counterexample.json --kind mb --out out/",
                "inputs": [{"path": "games/mb_counterexample.json", "sha256": "3f1c..."}],
                "outputs": [{"path": "out/menu_mb.json", "sha256": "a9e0..."}],
                "versions": {"menuforge": "0.1.0", "numpy": "1.26.4"},
                "seed": None,
            }
        }
    )


# ============================================================================
# SIMULATION
# ============================================================================

class SimMetrics(BaseModel):
    """Summary of one simulated run; averages are per round"""

    game: Optional[str] = None
    learner: str
    optimizer: str
    T: int
    seed: int
    empirical_csp: List[float]
    learner_utility: float = Field(..., description="u_L of the empirical CSP")
    regret: float = Field(..., description="Final external regret divided by T")
    swap_regret: float = Field(..., description="Final swap regret divided by T")
    mean_based_violations: Optional[int] = None
    distances: Dict[str, float] = Field(default_factory=dict, description="Distance from the empirical CSP to each menu")
    protocol_target: Optional[List[str]] = Field(None, description="Net CSP the cooperative optimizer signalled")
    protocol_linf_gap: Optional[float] = None
    protocol_bound: Optional[float] = Field(None, description="2/C + mn L / T")


# ============================================================================
# ERRORS
# ============================================================================

class ErrorReport(BaseModel):
    error: str = Field(..., description="Error type")
    detail: str = Field(..., description="Error message")
    exit_code: int

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "error": "UnsupportedShapeError",
                "detail": "Mean-based menus are built for 2x3 games, got 3x3",
                "exit_code": 3,
            }
        }
    )

"""Menu Domain V1 - menus, value faces, validity and Pareto reports"""

from .models import (
    Menu,
    ValueFaces,
    CheckReport,
    VerdictReason,
    ParetoVerdict,
    SeparationWitness,
    DominanceAudit,
)

__all__ = [
    "Menu",
    "ValueFaces",
    "CheckReport",
    "VerdictReason",
    "ParetoVerdict",
    "SeparationWitness",
    "DominanceAudit",
]

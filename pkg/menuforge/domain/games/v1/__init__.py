"""Game Domain V1 - games, CSPs, validation reports"""

from .models import (
    Game,
    CSP,
    CSPLike,
    Matrix,
    ActionClass,
    ActionReport,
    ValidationReport,
)

__all__ = [
    "Game",
    "CSP",
    "CSPLike",
    "Matrix",
    "ActionClass",
    "ActionReport",
    "ValidationReport",
]

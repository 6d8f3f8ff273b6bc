"""Simulation Domain V1 - learner/optimizer specs and transcripts"""

from .models import (
    LearnerKind,
    OBLIVIOUS_KINDS,
    Regularizer,
    EtaKind,
    EtaSchedule,
    GammaRate,
    AuditMode,
    OptimizerKind,
    LearnerSpec,
    ScheduleRun,
    OptimizerSpec,
    Transcript,
    EmpiricalCSP,
)

__all__ = [
    "LearnerKind",
    "OBLIVIOUS_KINDS",
    "Regularizer",
    "EtaKind",
    "EtaSchedule",
    "GammaRate",
    "AuditMode",
    "OptimizerKind",
    "LearnerSpec",
    "ScheduleRun",
    "OptimizerSpec",
    "Transcript",
    "EmpiricalCSP",
]

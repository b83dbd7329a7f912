"""Domain models for competing bootstrap percolation."""

from src.domain.models.errors import (
    BudgetExceeded,
    CapExceeded,
    ConfigError,
    DomainError,
    HardInvariantViolation,
    IntegrationFailure,
    LedgerInconsistency,
    MissingTrajectory,
    TrackingDisabled,
)
from src.domain.models.params import ModelParams, NodeColor, Regime, RegimeSpec
from src.domain.models.results import (
    ActivationEvent,
    Checkpoint,
    FinalResult,
    ModeSpec,
    ProlongedTail,
    RunMode,
    StopKind,
    StopRule,
    Trajectory,
    TrajectoryRecord,
)

__all__ = [
    "ActivationEvent",
    "BudgetExceeded",
    "CapExceeded",
    "Checkpoint",
    "ConfigError",
    "DomainError",
    "FinalResult",
    "HardInvariantViolation",
    "IntegrationFailure",
    "LedgerInconsistency",
    "MissingTrajectory",
    "ModeSpec",
    "ModelParams",
    "NodeColor",
    "ProlongedTail",
    "Regime",
    "RegimeSpec",
    "RunMode",
    "StopKind",
    "StopRule",
    "TrackingDisabled",
    "Trajectory",
    "TrajectoryRecord",
]

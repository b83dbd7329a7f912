"""Exceptions raised across the simulation and theory layers."""


class HardInvariantViolation(ValueError):
    """A parameter set or result breaks an invariant that cannot be relaxed."""


class CapExceeded(ValueError):
    """An instance is larger than the configured hard cap for the exact simulator."""


class MissingTrajectory(ValueError):
    """A result does not carry the per-step trajectory an operation needs."""


class DomainError(ValueError):
    """Arguments fall outside the domain where a formula or bound is valid."""


class BudgetExceeded(ValueError):
    """An experiment plan asks for more runs than the configured budget."""


class ConfigError(ValueError):
    """A config file or override is malformed or names an unknown key."""


class TrackingDisabled(ValueError):
    """Susceptible counts were requested from a run without active-node tracking."""


class IntegrationFailure(RuntimeError):
    """The ODE integrator or a quadrature failed to reach the requested accuracy."""


class LedgerInconsistency(RuntimeError):
    """An audit found the incremental mark bookkeeping out of sync with a rescan."""

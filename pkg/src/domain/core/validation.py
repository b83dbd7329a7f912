"""Parameter validation and the classical critical seed-set size."""

import logging
import math
from functools import lru_cache
from typing import List

from src.domain.models.errors import HardInvariantViolation
from src.domain.models.params import ModelParams

logger = logging.getLogger(__name__)


def check_hard_invariants(n: int, p: float, r: int) -> None:
    """Raise if (n, p, r) cannot describe any instance."""
    if n < 3:
        raise HardInvariantViolation(f"n must be at least 3, got {n}")
    if not 0.0 < p < 1.0:
        raise HardInvariantViolation(f"p must lie in (0, 1), got {p}")
    if r < 2:
        raise HardInvariantViolation(f"r must be at least 2, got {r}")


def regime_warnings(params: ModelParams) -> List[str]:
    """Soft violations of 1/n << p << 1/(n^{1/r} log n) at this finite n.

    Returns:
        Human-readable warnings, empty when the instance sits comfortably
        inside the asymptotic window
    """
    warnings = []
    n, p, r = params.n, params.p, params.r
    if n * p <= 1.0:
        warnings.append(f"n*p = {n * p:.4g} <= 1: graph is below the connectivity scale")
    upper = p * n ** (1.0 / r) * math.log(n)
    if upper >= 1.0:
        warnings.append(
            f"p * n^(1/r) * log n = {upper:.4g} >= 1: p is too large for the "
            "bootstrap window"
        )
    return warnings


def validate(params: ModelParams) -> None:
    """Check hard invariants and log soft regime warnings.

    Args:
        params: Instance to validate

    Raises:
        HardInvariantViolation: If a_R + a_B > n, p is outside (0, 1), r < 2,
            seed counts are negative or no non-seed node remains
    """
    check_hard_invariants(params.n, params.p, params.r)
    if params.a_r < 0 or params.a_b < 0:
        raise HardInvariantViolation("seed counts must be non-negative")
    if params.a_r + params.a_b > params.n:
        raise HardInvariantViolation(
            f"a_R + a_B = {params.a_r + params.a_b} exceeds n = {params.n}"
        )
    if params.n_white < 1:
        raise HardInvariantViolation("at least one non-seed node is required")
    if not 0 <= params.seed < 2**64:
        raise HardInvariantViolation(f"seed must be a 64-bit unsigned int, got {params.seed}")

    _warn_once(params.n, params.p, params.r)


@lru_cache(maxsize=256)
def _warn_once(n: int, p: float, r: int) -> None:
    # Replications of one instance share a single warning.
    for warning in regime_warnings(ModelParams(n=n, p=p, r=r, a_r=0, a_b=0)):
        logger.warning(f"Soft regime condition: {warning}")


def g_critical(n: int, p: float, r: int) -> float:
    """Critical seed-set size of classical r-bootstrap percolation on G(n, p).

    g = (1 - 1/r) * ((r - 1)! / (n p^r))^(1/(r - 1)), evaluated in log space.

    Args:
        n: Number of nodes
        p: Edge probability
        r: Activation threshold (>= 2)

    Returns:
        g > 0
    """
    check_hard_invariants(n, p, r)
    log_inner = math.lgamma(r) - math.log(n) - r * math.log(p)
    g = (1.0 - 1.0 / r) * math.exp(log_inner / (r - 1))
    if p * g >= 1.0:
        logger.warning(f"p*g = {p * g:.4g} >= 1 for n={n}, p={p}, r={r}")
    return g

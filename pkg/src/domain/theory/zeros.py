"""Zeros of beta_S in the q = g regime."""

import logging
from typing import Optional, Tuple

from scipy.optimize import brentq

from src.domain.models.errors import DomainError
from src.domain.models.params import NodeColor, Regime
from src.domain.theory.beta import BetaSpec, beta_single

logger = logging.getLogger(__name__)

ZERO_XTOL = 1e-12
# Within this distance of 1 the two zeros merge at the minimum of beta_S.
DOUBLE_ZERO_TOL = 1e-12


def beta_minimum(spec: BetaSpec, color: NodeColor) -> Tuple[float, float]:
    """(x*, beta_S(x*)): beta_S is convex with minimum alpha_S - 1 at x* = r/(r-1) - alpha_S."""
    x_star = spec.r / (spec.r - 1) - spec.alpha(color)
    return x_star, spec.alpha(color) - 1.0


def beta_zeros(
    spec: BetaSpec, color: NodeColor
) -> Tuple[Optional[float], Optional[float]]:
    """The smaller and larger positive zeros (z_S, w_S) of beta_S.

    alpha_S < 1 gives two zeros, alpha_S = 1 a double zero, alpha_S > 1 none
    (returned as (None, None)).

    Raises:
        DomainError: Outside the q = g regime
    """
    if spec.regime is not Regime.Q_EQUALS_G:
        raise DomainError("beta_S has positive zeros only in regime q_equals_g")
    alpha = spec.alpha(color)
    x_star, _ = beta_minimum(spec, color)
    if abs(alpha - 1.0) <= DOUBLE_ZERO_TOL:
        return x_star, x_star
    if alpha > 1.0:
        return None, None

    def f(y: float) -> float:
        return beta_single(spec, color, y)

    z = brentq(f, 0.0, x_star, xtol=ZERO_XTOL)
    upper = 2.0 * x_star + 1.0
    while f(upper) <= 0.0:
        upper *= 2.0
    w = brentq(f, x_star, upper, xtol=ZERO_XTOL)
    logger.debug(f"beta_{color.label} zeros for alpha={alpha}: z={z:.12g}, w={w:.12g}")
    return z, w


def smallest_zero(spec: BetaSpec, color: NodeColor) -> Optional[float]:
    """z_S, or None when beta_S has no zero."""
    if spec.regime is not Regime.Q_EQUALS_G:
        return None
    return beta_zeros(spec, color)[0]

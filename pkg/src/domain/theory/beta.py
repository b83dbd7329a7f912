"""Scaled threshold rates beta_S in the four q-regimes, and exact pi_S.

beta_S(x_R, x_B) is the limit, on time-scale q, of the expected number of
S-suprathreshold nodes when x_R q red and x_B q black nodes are active.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import stats

from src.domain.models.errors import DomainError, HardInvariantViolation
from src.domain.models.params import NodeColor, Regime, RegimeSpec

DEFAULT_TRUNCATION_TOL = 1e-12


def threshold_constant(r: int) -> float:
    """c_r = r^-1 (1 - r^-1)^(r-1), the q = g leading coefficient."""
    return (1.0 / r) * (1.0 - 1.0 / r) ** (r - 1)


@dataclass(frozen=True)
class BetaSpec:
    """Everything beta_R and beta_B depend on.

    Attributes:
        regime: Scaling of q
        r: Activation threshold
        alpha_r: Red seed density a_R / q
        alpha_b: Black seed density a_B / q
        truncation_tol: Residual Poisson mass allowed in the q = 1/p tail sum

    Raises:
        HardInvariantViolation: Unless alpha_R > alpha_B > 0, r >= 2 and
            truncation_tol lies in (0, 1e-6]
    """

    regime: Regime
    r: int
    alpha_r: float
    alpha_b: float
    truncation_tol: float = DEFAULT_TRUNCATION_TOL

    def __post_init__(self):
        if self.r < 2:
            raise HardInvariantViolation(f"r must be at least 2, got {self.r}")
        if not self.alpha_r > self.alpha_b > 0:
            raise HardInvariantViolation(
                f"need alpha_R > alpha_B > 0, got {self.alpha_r}, {self.alpha_b}"
            )
        if not 0 < self.truncation_tol <= 1e-6:
            raise HardInvariantViolation(
                f"truncation_tol must lie in (0, 1e-6], got {self.truncation_tol}"
            )

    @classmethod
    def from_regime(cls, spec: RegimeSpec, r: int, **kwargs) -> "BetaSpec":
        return cls(spec.regime, r, spec.alpha_r, spec.alpha_b, **kwargs)

    def alpha(self, color: NodeColor) -> float:
        return self.alpha_r if color is NodeColor.RED else self.alpha_b

    def with_alphas(self, alpha_r: float, alpha_b: float) -> "BetaSpec":
        return BetaSpec(self.regime, self.r, alpha_r, alpha_b, self.truncation_tol)


# ----------------------------------------------------------------------
# Branches
# ----------------------------------------------------------------------


def beta_single(spec: BetaSpec, color: NodeColor, y: float) -> float:
    """beta_S as a function of x_S alone (regimes with q << 1/p).

    Raises:
        DomainError: For the coupled regimes
    """
    if not spec.regime.decoupled:
        raise DomainError(f"beta_S depends on both colors in regime {spec.regime.value}")
    base = y + spec.alpha(color)
    if spec.regime is Regime.Q_EQUALS_G:
        return threshold_constant(spec.r) * base**spec.r - y
    return base**spec.r / math.factorial(spec.r)


def skellam_tail(lam_own: float, lam_other: float, r: int, tol: float) -> float:
    """P(Po(lam_own) - Po(lam_other) >= r) as a sum over the subtracted term.

    The sum over j of P(Po(lam_other) = j) P(Po(lam_own) >= r + j) stops
    where the remaining mass of Po(lam_other) drops below ``tol``.
    """
    upper = int(stats.poisson.isf(tol, lam_other)) + 1 if lam_other > 0 else 0
    j = np.arange(upper + 1)
    weights = stats.poisson.pmf(j, lam_other)
    tails = stats.poisson.sf(r + j - 1, lam_own)
    return float(np.dot(weights, tails))


def _indicator(own: float, total: float) -> float:
    # Closed half-space: a tie at exactly 1/2 counts for both colors.
    return 1.0 if own / total >= 0.5 else 0.0


def beta(spec: BetaSpec, x_r: float, x_b: float) -> Tuple[float, float]:
    """(beta_R, beta_B) at the scaled activation counts (x_R, x_B).

    Args:
        spec: Regime, threshold and seed densities
        x_r: Scaled red activations (>= 0)
        x_b: Scaled black activations (>= 0)

    Returns:
        (beta_R, beta_B)

    Raises:
        DomainError: If x_r or x_b is negative
    """
    if x_r < 0 or x_b < 0:
        raise DomainError(f"beta needs x_R, x_B >= 0, got ({x_r}, {x_b})")
    lam_r = x_r + spec.alpha_r
    lam_b = x_b + spec.alpha_b

    if spec.regime.decoupled:
        return (
            beta_single(spec, NodeColor.RED, x_r),
            beta_single(spec, NodeColor.BLACK, x_b),
        )
    if spec.regime is Regime.Q_EQUALS_PINV:
        tol = spec.truncation_tol
        return (
            skellam_tail(lam_r, lam_b, spec.r, tol),
            skellam_tail(lam_b, lam_r, spec.r, tol),
        )
    total = lam_r + lam_b
    return _indicator(lam_r, total), _indicator(lam_b, total)


def beta_color(spec: BetaSpec, color: NodeColor, x_r: float, x_b: float) -> float:
    """beta_S for one color."""
    values = beta(spec, x_r, x_b)
    return values[0] if color is NodeColor.RED else values[1]


# ----------------------------------------------------------------------
# Finite-n threshold probability
# ----------------------------------------------------------------------


def pi_s(
    k_r: int,
    k_b: int,
    a_r: int,
    a_b: int,
    p: float,
    r: int,
    color: NodeColor = NodeColor.RED,
) -> float:
    """P(Bin(k_S + a_S, p) - Bin(k_S' + a_S', p) >= r), S' the other color.

    This is the probability that a non-seed node is S-suprathreshold after
    k_R red and k_B black activations when every active node marks it
    independently with probability p.

    Raises:
        DomainError: On negative counts or p outside [0, 1]
    """
    if min(k_r, k_b, a_r, a_b) < 0:
        raise DomainError("activation and seed counts must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    own, other = (k_r + a_r, k_b + a_b) if color is NodeColor.RED else (k_b + a_b, k_r + a_r)
    j = np.arange(other + 1)
    weights = stats.binom.pmf(j, other, p)
    tails = stats.binom.sf(r + j - 1, own, p)
    return float(np.clip(np.dot(weights, tails), 0.0, 1.0))

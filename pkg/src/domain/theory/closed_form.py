"""Closed forms for r = 2, q = g with a percolating red process.

With r = 2, beta_S(y) = (y + alpha_S)^2 / 4 - y, and both the red blow-up
time and the black terminal value can be written down explicitly.
"""

import math

from src.domain.models.errors import DomainError, IntegrationFailure
from src.domain.models.params import ALPHA_EQUALITY_RTOL, Regime
from src.domain.theory.beta import BetaSpec
from src.domain.theory.prediction import TheoryPrediction, timing_closure

BOUND_SLACK = 1e-12


def kappa_g_r2(alpha_r: float) -> float:
    """Blow-up time of g_R: 2 / sqrt(alpha_R - 1) * (pi/2 - arctan((alpha_R - 2) / (2 sqrt(alpha_R - 1))))."""
    if alpha_r <= 1.0:
        raise DomainError(f"kappa_g is finite only for alpha_R > 1, got {alpha_r}")
    s = math.sqrt(alpha_r - 1.0)
    return 2.0 / s * (math.pi / 2.0 - math.atan((alpha_r - 2.0) / (2.0 * s)))


def zeros_r2(alpha: float):
    """(z, w) = 2 - alpha -/+ 2 sqrt(1 - alpha) for alpha <= 1."""
    if alpha > 1.0:
        raise DomainError(f"no zeros for alpha > 1, got {alpha}")
    s = math.sqrt(1.0 - alpha)
    return 2.0 - alpha - 2.0 * s, 2.0 - alpha + 2.0 * s


def black_limit_r2(alpha_r: float, alpha_b: float) -> float:
    """Limit of A_B* / q, that is alpha_B + g_B(kappa_g).

    Raises:
        DomainError: For alpha_R <= 1, alpha_B <= 0, alpha_B >= alpha_R or
            alpha_B == 1
    """
    if alpha_r <= 1.0:
        raise DomainError(f"closed forms need alpha_R > 1, got {alpha_r}")
    if not 0.0 < alpha_b < alpha_r:
        raise DomainError(f"need 0 < alpha_B < alpha_R, got alpha_B = {alpha_b}")
    if math.isclose(alpha_b, 1.0, rel_tol=ALPHA_EQUALITY_RTOL, abs_tol=ALPHA_EQUALITY_RTOL):
        raise DomainError("alpha_B = 1 has no closed form; use the ODE route")

    kappa = kappa_g_r2(alpha_r)
    if alpha_b < 1.0:
        s = math.sqrt(1.0 - alpha_b)
        # exp overflows long before the ratio moves; use its xi -> inf limit.
        if kappa * s > 700.0:
            return alpha_b * alpha_b / (2.0 - alpha_b + 2.0 * s) + alpha_b
        xi = math.exp(kappa * s)
        return (
            alpha_b * alpha_b * (xi - 1.0) / ((2.0 - alpha_b) * (xi - 1.0) + 2.0 * s * (xi + 1.0))
            + alpha_b
        )
    s = math.sqrt(alpha_b - 1.0)
    xi_prime = math.atan((alpha_b - 2.0) / (2.0 * s)) + s * kappa / 2.0
    if xi_prime >= math.pi / 2.0:
        raise DomainError(f"black limit diverges for alpha_R = {alpha_r}, alpha_B = {alpha_b}")
    return 2.0 + 2.0 * s * math.tan(xi_prime)


def closed_form_r2(alpha_r: float, alpha_b: float) -> TheoryPrediction:
    """TheoryPrediction for r = 2, q = g, alpha_R > 1, from closed forms only.

    Red percolates, so z_R and kappa_f stay None (no zero, unbounded). The
    timing integral is attached; it has no closed form and is solved numerically.

    Raises:
        DomainError: For alpha_R <= 1, alpha_B == 1 or alpha_B >= alpha_R
        IntegrationFailure: If the black limit is not below alpha_B + z_B
    """
    limit_b = black_limit_r2(alpha_r, alpha_b)
    z_b = w_b = None
    if alpha_b < 1.0:
        z_b, w_b = zeros_r2(alpha_b)
        # Equality is the xi -> inf limit, reached in floating point for large kappa_g.
        if limit_b - (alpha_b + z_b) > BOUND_SLACK:
            raise IntegrationFailure(
                f"black limit {limit_b} exceeds alpha_B + z_B = {alpha_b + z_b}"
            )
    return TheoryPrediction(
        regime=Regime.Q_EQUALS_G,
        r=2,
        alpha_r=alpha_r,
        alpha_b=alpha_b,
        limit_ar=1.0,
        ar_scale="n",
        limit_ab_over_q=limit_b,
        z_r=None,
        z_b=z_b,
        w_b=w_b,
        kappa_g=kappa_g_r2(alpha_r),
        g_b_at_kappa_g=limit_b - alpha_b,
        kappa_f=None,
        eta=1.0,
        source="closed_form",
        timing=timing_closure(BetaSpec(Regime.Q_EQUALS_G, 2, alpha_r, alpha_b)),
    )


def alpha_b_boundary_r2(alpha_r: float) -> float:
    """Common value of both one-sided limits of black_limit_r2 at alpha_B = 1."""
    kappa = kappa_g_r2(alpha_r)
    return 2.0 - 4.0 / (4.0 + kappa)

"""Time-scale factor eta and the limits of the rescaled activation times."""

import logging
from typing import Optional

from scipy.integrate import quad
from scipy.optimize import brentq

from src.domain.models.errors import DomainError
from src.domain.models.params import NodeColor, Regime
from src.domain.theory.beta import BetaSpec, beta
from src.domain.theory.ode import OdeSolution, beta_integral, solve_f

logger = logging.getLogger(__name__)

TIMING_EPSREL = 1e-8


def eta(regime: Regime, n: int, p: float, q: float, r: int = 2) -> float:
    """Scaling factor that makes eta * T_{floor(kappa q)} converge.

    1 for q = g, n (q p)^r / q for g << q << 1/p, n / q otherwise.
    """
    if n <= 0 or q <= 0 or not 0 < p < 1:
        raise DomainError(f"eta needs n, q > 0 and p in (0, 1), got n={n}, p={p}, q={q}")
    if regime is Regime.Q_EQUALS_G:
        return 1.0
    if regime is Regime.G_LL_Q_LL_PINV:
        return n * (q * p) ** r / q
    return n / q


def _total_rate(spec: BetaSpec, f: OdeSolution, x: float) -> float:
    f_r, f_b = f(x)
    b_r, b_b = beta(spec, max(f_r, 0.0), max(f_b, 0.0))
    return b_r + b_b


def timing_tau(
    spec: BetaSpec,
    kappa: float,
    f: Optional[OdeSolution] = None,
    epsrel: float = TIMING_EPSREL,
) -> float:
    """Integral over [0, kappa] of dx / (beta_R(f(x)) + beta_B(f(x))).

    Args:
        spec: Regime, threshold and seed densities
        kappa: Scaled activation count (0 <= kappa < kappa_f)
        f: Precomputed solution of the f-problem covering [0, kappa]
        epsrel: Relative tolerance of the quadrature

    Returns:
        Limit of eta * T_{floor(kappa q)}

    Raises:
        DomainError: If kappa < 0 or kappa >= kappa_f
    """
    if kappa < 0:
        raise DomainError(f"kappa must be non-negative, got {kappa}")
    if kappa == 0:
        return 0.0
    if f is None or f.x_end < kappa:
        f = solve_f(spec, kappa)
    if f.kappa is not None and kappa >= f.kappa:
        raise DomainError(f"kappa = {kappa} is not below kappa_f = {f.kappa:.10g}")
    if spec.regime is Regime.PINV_LL_Q_LL_N:
        return float(kappa)
    value, _ = quad(lambda x: 1.0 / _total_rate(spec, f, x), 0.0, kappa, epsrel=epsrel, limit=200)
    return float(value)


def timing_tau_color(
    spec: BetaSpec,
    color: NodeColor,
    kappa_s: float,
    f: Optional[OdeSolution] = None,
    x_max: float = 1e3,
) -> float:
    """Limit of eta * T^S_{floor(kappa_S q)}, the time of the kappa_S q-th S activation.

    The activation index is x = f_S^{-1}(kappa_S), found by root-finding on
    the monotone component f_S.

    Raises:
        DomainError: If kappa_S is not below the limit of f_S
    """
    if kappa_s < 0:
        raise DomainError(f"kappa_S must be non-negative, got {kappa_s}")
    if kappa_s == 0:
        return 0.0
    if f is None:
        f = solve_f(spec, x_max)

    def component(x: float) -> float:
        value = f(x)
        return value[0] if color is NodeColor.RED else value[1]

    end = f.x_end
    if component(end) <= kappa_s:
        raise DomainError(
            f"kappa_S = {kappa_s} is not reached by f_{color.label} on [0, {end:.6g}]"
        )
    x = brentq(lambda s: component(s) - kappa_s, 0.0, end, xtol=1e-13)
    logger.debug(f"f_{color.label}^-1({kappa_s}) = {x:.10g}")
    return timing_tau(spec, x, f)


def color_identity_gap(spec: BetaSpec, color: NodeColor, kappa_s: float) -> float:
    """|timing_tau_color - beta_integral| for q << 1/p, where both are equal."""
    return abs(timing_tau_color(spec, color, kappa_s) - beta_integral(spec, color, kappa_s))

"""Chernoff-type deviation bounds for binomial and Poisson variables.

Used to size statistical tolerances in the experiment checks.
"""

import math
from enum import Enum
from typing import Optional

from src.domain.models.errors import DomainError


class TailKind(Enum):
    """Which tail and which distribution a bound refers to."""

    BINOMIAL_UPPER = "binomial_upper"  # P(Bin(m, q) >= k), k >= mu
    BINOMIAL_UPPER_COARSE = "binomial_upper_coarse"  # same, k >= e^2 mu
    BINOMIAL_LOWER = "binomial_lower"  # P(Bin(m, q) <= k), k <= mu
    POISSON_UPPER = "poisson_upper"  # P(Po(lam) >= k), k >= lam
    POISSON_LOWER = "poisson_lower"  # P(Po(lam) <= k), k <= lam


def zeta(x: float) -> float:
    """1 - x + x log x for x > 0, and 1 at x = 0."""
    if x < 0:
        raise DomainError(f"zeta is defined for x >= 0, got {x}")
    if x == 0:
        return 1.0
    return 1.0 - x + x * math.log(x)


def tail_bounds(kind: TailKind, m_or_lambda: float, q: Optional[float], k: float) -> float:
    """Upper bound on a tail probability.

    Args:
        kind: Tail and distribution
        m_or_lambda: Number of trials m (binomial) or mean lambda (Poisson)
        q: Success probability for the binomial kinds, None for Poisson
        k: Threshold

    Returns:
        exp(-mu zeta(k / mu)), or exp(-(k / 2) log(k / mu)) for the coarse kind

    Raises:
        DomainError: If k lies outside the range where the bound holds, or
            the distribution parameters are invalid
    """
    binomial = kind in (
        TailKind.BINOMIAL_UPPER,
        TailKind.BINOMIAL_UPPER_COARSE,
        TailKind.BINOMIAL_LOWER,
    )
    if binomial:
        if q is None or not 0.0 <= q <= 1.0 or m_or_lambda < 0:
            raise DomainError(f"binomial bound needs m >= 0 and q in [0, 1], got {m_or_lambda}, {q}")
        mu = m_or_lambda * q
    else:
        if q is not None:
            raise DomainError("Poisson bounds take no success probability")
        if m_or_lambda <= 0:
            raise DomainError(f"Poisson mean must be positive, got {m_or_lambda}")
        mu = m_or_lambda
    if k < 0:
        raise DomainError(f"threshold must be non-negative, got {k}")

    if mu <= 0:
        raise DomainError("bound undefined for a zero mean")

    if kind in (TailKind.BINOMIAL_UPPER, TailKind.POISSON_UPPER):
        if k < mu:
            raise DomainError(f"upper-tail bound needs k >= mu = {mu:.6g}, got {k}")
        return math.exp(-mu * zeta(k / mu))
    if kind is TailKind.BINOMIAL_UPPER_COARSE:
        if k < math.e**2 * mu:
            raise DomainError(f"coarse bound needs k >= e^2 mu = {math.e ** 2 * mu:.6g}, got {k}")
        return math.exp(-(k / 2.0) * math.log(k / mu))
    if k > mu:
        raise DomainError(f"lower-tail bound needs k <= mu = {mu:.6g}, got {k}")
    return math.exp(-mu * zeta(k / mu))

"""Maximal solutions of the two Cauchy problems driven by beta.

g solves g' = beta(g), g(0) = (0, 0): the scaled activation counts as a
function of scaled physical time. f solves f' = beta(f) / (beta_R + beta_B),
f(0) = (0, 0): the same counts indexed by the scaled number of activations,
so f_R + f_B = x.

Design decisions:
- Integration uses scipy's adaptive RK45 with rtol 1e-9
- Blow-up of g_R is detected at a configurable ceiling; kappa_g itself
  comes from the reciprocal quadrature, not from the integrator
- An unbounded maximal domain is kappa = None, never a float infinity
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from src.domain.models.errors import DomainError, IntegrationFailure
from src.domain.models.params import NodeColor, Regime
from src.domain.theory.beta import BetaSpec, beta, beta_single
from src.domain.theory.zeros import smallest_zero
from src.infrastructure.config import get_settings

logger = logging.getLogger(__name__)

RTOL = 1e-9
ATOL = 1e-12
QUAD_EPSREL = 1e-10
GRID_POINTS = 401

# Below this total rate the f-problem has reached its terminal point.
DENOMINATOR_FLOOR = 1e-10

# Horizon of the q = 1/p solve used to estimate the limit of the black component.
OVERLINE_X_MAX = 1e3

Pair = Tuple[float, float]


@dataclass
class OdeSolution:
    """Numerical solution of g or f on [0, end of grid].

    Attributes:
        name: "g" or "f"
        grid: Increasing abscissae
        r_values: Red component on the grid
        b_values: Black component on the grid
        kappa: Right end of the maximal domain, None when unbounded
        terminal_b: Limit of the black component at kappa
        terminal_b_estimated: True when terminal_b is a numeric estimate
            without a limit formula (regime q = 1/p)
        dense: Continuous evaluation x -> (red, black) inside the grid range
    """

    name: str
    grid: np.ndarray
    r_values: np.ndarray
    b_values: np.ndarray
    kappa: Optional[float]
    terminal_b: Optional[float]
    terminal_b_estimated: bool = False
    dense: Optional[Callable[[float], Pair]] = field(default=None, repr=False)

    @property
    def x_end(self) -> float:
        return float(self.grid[-1])

    @property
    def unbounded(self) -> bool:
        return self.kappa is None

    def __call__(self, x: float) -> Pair:
        if self.dense is not None:
            return self.dense(x)
        return (
            float(np.interp(x, self.grid, self.r_values)),
            float(np.interp(x, self.grid, self.b_values)),
        )

    def to_dict(self) -> Dict[str, Any]:
        """JSON object with the grid as parallel arrays."""
        return {
            "name": self.name,
            "grid": self.grid.tolist(),
            "r": self.r_values.tolist(),
            "b": self.b_values.tolist(),
            "kappa": self.kappa,
            "kappa_unbounded": self.unbounded,
            "terminal_b": self.terminal_b,
            "terminal_b_estimated": self.terminal_b_estimated,
        }


# ----------------------------------------------------------------------
# Reciprocal quadratures (decoupled regimes)
# ----------------------------------------------------------------------


def _reciprocal_in_u(spec: BetaSpec, color: NodeColor) -> Callable[[float], float]:
    """1 / beta_S(y) dy rewritten on u in [0, 1) with y = u / (1 - u)."""

    def integrand(u: float) -> float:
        if u >= 1.0:
            return 0.0
        y = u / (1.0 - u)
        return 1.0 / (beta_single(spec, color, y) * (1.0 - u) ** 2)

    return integrand


def kappa_integral(spec: BetaSpec, color: NodeColor = NodeColor.RED) -> Optional[float]:
    """kappa_S = integral over [0, inf) of dy / beta_S(y), None when infinite.

    Raises:
        DomainError: For the coupled regimes
    """
    if not spec.regime.decoupled:
        raise DomainError(f"kappa_S is defined for decoupled regimes, not {spec.regime.value}")
    if spec.regime is Regime.Q_EQUALS_G and spec.alpha(color) <= 1.0:
        return None
    value, _ = quad(_reciprocal_in_u(spec, color), 0.0, 1.0, epsrel=QUAD_EPSREL, limit=200)
    return float(value)


def beta_integral(spec: BetaSpec, color: NodeColor, upper: float) -> float:
    """Integral over [0, upper] of dy / beta_S(y).

    Raises:
        DomainError: For the coupled regimes, negative upper, or an upper
            limit at or beyond the zero z_S where the integral diverges
    """
    if not spec.regime.decoupled:
        raise DomainError(f"beta_integral needs a decoupled regime, not {spec.regime.value}")
    if upper < 0:
        raise DomainError(f"upper limit must be non-negative, got {upper}")
    z = smallest_zero(spec, color)
    if z is not None and upper >= z:
        raise DomainError(f"integral diverges at the zero z = {z:.6g}")
    if upper == 0:
        return 0.0
    value, _ = quad(
        lambda y: 1.0 / beta_single(spec, color, y), 0.0, upper, epsrel=QUAD_EPSREL, limit=200
    )
    return float(value)


def kappa_h(alpha: float, r: int) -> float:
    """Blow-up time r! / ((r - 1) alpha^(r-1)) of h' = (h + alpha)^r / r!."""
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return math.factorial(r) / ((r - 1) * alpha ** (r - 1))


def h_closed_form(alpha: float, r: int, y: float) -> float:
    """Solution of h' = (h + alpha)^r / r!, h(0) = 0, for 0 <= y < kappa_h.

    Raises:
        DomainError: Outside [0, kappa_h)
    """
    if not 0 <= y < kappa_h(alpha, r):
        raise DomainError(f"y = {y} outside [0, kappa_h = {kappa_h(alpha, r):.6g})")
    inner = alpha ** (1 - r) - (r - 1) * y / math.factorial(r)
    return inner ** (-1.0 / (r - 1)) - alpha


def terminal_b(spec: BetaSpec, kappa_g: float) -> float:
    """g_B(kappa_g), the b with integral over [0, b] of dy / beta_B(y) = kappa_g.

    Raises:
        DomainError: For the coupled regimes
    """
    if spec.regime is Regime.G_LL_Q_LL_PINV:
        r = spec.r
        return (spec.alpha_b ** (1 - r) - spec.alpha_r ** (1 - r)) ** (-1.0 / (r - 1)) - spec.alpha_b
    if spec.regime is not Regime.Q_EQUALS_G:
        raise DomainError("terminal_b has a quadrature form only for decoupled regimes")

    z = smallest_zero(spec, NodeColor.BLACK)
    if z is not None:
        # The integral diverges at z_B, so a root exists in (0, z_B).
        def gap(b: float) -> float:
            return beta_integral(spec, NodeColor.BLACK, b) - kappa_g

        upper = z * (1.0 - 1e-12)
        if gap(upper) <= 0.0:
            return upper
        return float(brentq(gap, 0.0, upper, xtol=1e-13))

    integrand = _reciprocal_in_u(spec, NodeColor.BLACK)

    def gap_u(u: float) -> float:
        value, _ = quad(integrand, 0.0, u, epsrel=QUAD_EPSREL, limit=200)
        return value - kappa_g

    u = brentq(gap_u, 0.0, 1.0 - 1e-15, xtol=1e-14)
    return float(u / (1.0 - u))


# ----------------------------------------------------------------------
# Cauchy problems
# ----------------------------------------------------------------------


def _clamped_beta(spec: BetaSpec, state) -> Pair:
    return beta(spec, max(float(state[0]), 0.0), max(float(state[1]), 0.0))


def _check(solution, label: str) -> None:
    if solution.status == -1:
        raise IntegrationFailure(f"{label}: {solution.message}")


def _dense(solution) -> Callable[[float], Pair]:
    def evaluate(x: float) -> Pair:
        values = solution.sol(x)
        return float(values[0]), float(values[1])

    return evaluate


def richardson_limit(v1: float, v2: float, v3: float) -> float:
    """Richardson extrapolation of samples at x, 2x, 4x with the error order estimated.

    Assumes v(x) = L + C x^-k. The ratio of successive differences gives 2^k;
    without a ratio above one the last sample is returned unchanged.
    """
    d1, d2 = v2 - v1, v3 - v2
    if d1 == 0.0 or d2 == 0.0:
        return v3
    ratio = d1 / d2
    if ratio <= 1.0 + 1e-12:
        return v3
    return v3 + d2 / (ratio - 1.0)


def _identity_solution(name: str, x_max: float) -> OdeSolution:
    grid = np.linspace(0.0, x_max, GRID_POINTS)
    return OdeSolution(
        name=name,
        grid=grid,
        r_values=grid.copy(),
        b_values=np.zeros_like(grid),
        kappa=None,
        terminal_b=0.0,
        dense=lambda x: (float(x), 0.0),
    )


def estimate_overline_b(spec: BetaSpec, x_max: float = OVERLINE_X_MAX) -> float:
    """Limit of g_B in regime q = 1/p, extrapolated from a solve to x_max."""
    sol = solve_ivp(
        lambda y, g: _clamped_beta(spec, g),
        (0.0, x_max),
        [0.0, 0.0],
        method="RK45",
        rtol=RTOL,
        atol=ATOL,
        dense_output=True,
    )
    _check(sol, "q = 1/p terminal solve")
    samples = [float(sol.sol(x)[1]) for x in (x_max / 4, x_max / 2, x_max)]
    estimate = richardson_limit(*samples)
    logger.debug(f"Black limit estimate {estimate:.10g} from samples {samples}")
    return estimate


def solve_g(spec: BetaSpec, x_max: float, ceiling: Optional[float] = None) -> OdeSolution:
    """Maximal solution of g' = beta(g), g(0) = (0, 0), on [0, min(x_max, kappa_g)).

    Args:
        spec: Regime, threshold and seed densities
        x_max: Right end of the requested range (> 0)
        ceiling: Value of g_R treated as blow-up (default from settings)

    Returns:
        OdeSolution with kappa = kappa_g (None when unbounded) and
        terminal_b = g_B(kappa_g)

    Raises:
        DomainError: If x_max <= 0
        IntegrationFailure: If step control fails
    """
    if not x_max > 0:
        raise DomainError(f"x_max must be positive, got {x_max}")
    if spec.regime is Regime.PINV_LL_Q_LL_N:
        return _identity_solution("g", x_max)

    ceiling = ceiling if ceiling is not None else get_settings().ode_ceiling

    def blow_up(y, g):
        return g[0] - ceiling

    blow_up.terminal = True
    blow_up.direction = 1

    sol = solve_ivp(
        lambda y, g: _clamped_beta(spec, g),
        (0.0, x_max),
        [0.0, 0.0],
        method="RK45",
        rtol=RTOL,
        atol=ATOL,
        dense_output=True,
        events=blow_up,
    )
    _check(sol, "solve_g")

    estimated = False
    if spec.regime.decoupled:
        kappa = kappa_integral(spec, NodeColor.RED)
        if kappa is None:
            terminal = smallest_zero(spec, NodeColor.BLACK)
        else:
            terminal = terminal_b(spec, kappa)
    else:
        kappa = None
        terminal = estimate_overline_b(spec)
        estimated = True

    if sol.status == 1:
        logger.debug(f"g_R reached {ceiling:.3g} at y={sol.t[-1]:.10g} (kappa_g={kappa})")

    grid = np.asarray(sol.t)
    return OdeSolution(
        name="g",
        grid=grid,
        r_values=np.asarray(sol.y[0]),
        b_values=np.asarray(sol.y[1]),
        kappa=kappa,
        terminal_b=terminal,
        terminal_b_estimated=estimated,
        dense=_dense(sol),
    )


def kappa_f(spec: BetaSpec) -> Optional[float]:
    """End of the maximal domain of f: z_R + z_B for q = g with alpha_R <= 1."""
    if spec.regime is Regime.Q_EQUALS_G and spec.alpha_r <= 1.0:
        return smallest_zero(spec, NodeColor.RED) + smallest_zero(spec, NodeColor.BLACK)
    return None


def _solve_f_ode(spec: BetaSpec, x_max: float, kappa: Optional[float]) -> OdeSolution:
    upper = x_max if kappa is None else min(x_max, kappa * (1.0 - 1e-9))

    def rhs(x, f):
        b_r, b_b = _clamped_beta(spec, f)
        total = b_r + b_b
        if total <= 0.0:
            return [0.0, 0.0]
        return [b_r / total, b_b / total]

    def exhausted(x, f):
        return sum(_clamped_beta(spec, f)) - DENOMINATOR_FLOOR

    exhausted.terminal = True
    exhausted.direction = -1

    sol = solve_ivp(
        rhs,
        (0.0, upper),
        [0.0, 0.0],
        method="RK45",
        rtol=RTOL,
        atol=ATOL,
        dense_output=True,
        events=exhausted,
    )
    _check(sol, "solve_f")
    return OdeSolution(
        name="f",
        grid=np.asarray(sol.t),
        r_values=np.asarray(sol.y[0]),
        b_values=np.asarray(sol.y[1]),
        kappa=kappa,
        terminal_b=None,
        dense=_dense(sol),
    )


def _solve_f_transfer(spec: BetaSpec, x_max: float, kappa: Optional[float]) -> OdeSolution:
    """f(x) = g(y(x)) where y(x) inverts y -> g_R(y) + g_B(y)."""
    y_max = OVERLINE_X_MAX
    g_kappa = kappa_integral(spec, NodeColor.RED) if spec.regime.decoupled else None
    if g_kappa is not None:
        y_max = g_kappa
    g = solve_g(spec, y_max)
    y_end = g.x_end
    total_end = sum(g(y_end))
    upper = x_max if kappa is None else min(x_max, kappa * (1.0 - 1e-9))
    upper = min(upper, total_end)

    def invert(x: float) -> float:
        if x <= 0.0:
            return 0.0
        return brentq(lambda y: sum(g(y)) - x, 0.0, y_end, xtol=1e-14, rtol=1e-13)

    def evaluate(x: float) -> Pair:
        return g(invert(x))

    grid = np.linspace(0.0, upper, GRID_POINTS)
    values = np.array([evaluate(x) for x in grid])
    return OdeSolution(
        name="f",
        grid=grid,
        r_values=values[:, 0],
        b_values=values[:, 1],
        kappa=kappa,
        terminal_b=None,
        dense=evaluate,
    )


def solve_f(spec: BetaSpec, x_max: float, route: str = "ode") -> OdeSolution:
    """Maximal solution of f' = beta(f) / (beta_R(f) + beta_B(f)), f(0) = (0, 0).

    Args:
        spec: Regime, threshold and seed densities
        x_max: Right end of the requested range
        route: "ode" integrates the f-problem directly; "transfer" maps the
            g solution through the inverse of g_R + g_B (q << 1/p only)

    Returns:
        OdeSolution on [0, min(x_max, kappa_f)) with kappa = kappa_f and the
        black limit in terminal_b

    Raises:
        DomainError: On an unknown route or x_max <= 0
        IntegrationFailure: If step control fails
    """
    if not x_max > 0:
        raise DomainError(f"x_max must be positive, got {x_max}")
    if spec.regime is Regime.PINV_LL_Q_LL_N:
        return _identity_solution("f", x_max)

    kappa = kappa_f(spec)
    if route == "ode":
        solution = _solve_f_ode(spec, x_max, kappa)
    elif route == "transfer":
        solution = _solve_f_transfer(spec, x_max, kappa)
    else:
        raise DomainError(f"unknown route {route!r}")

    if kappa is not None:
        solution.terminal_b = smallest_zero(spec, NodeColor.BLACK)
    elif spec.regime.decoupled:
        solution.terminal_b = terminal_b(spec, kappa_integral(spec, NodeColor.RED))
    else:
        solution.terminal_b = estimate_overline_b(spec)
        solution.terminal_b_estimated = True
    return solution

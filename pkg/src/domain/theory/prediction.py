"""Limit predictions for the final counts, one per declared regime."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional

from src.domain.models.errors import DomainError, IntegrationFailure
from src.domain.models.params import NodeColor, Regime, RegimeSpec
from src.domain.theory.beta import BetaSpec
from src.domain.theory.ode import (
    OdeSolution,
    estimate_overline_b,
    kappa_f,
    kappa_h,
    kappa_integral,
    solve_f,
    terminal_b,
)
from src.domain.theory.timing import eta as eta_factor
from src.domain.theory.timing import timing_tau
from src.domain.theory.zeros import beta_zeros

logger = logging.getLogger(__name__)

# Margin by which g_B(kappa_g) must stay below z_B before a warning is logged.
ZERO_MARGIN = 1e-9

# Horizon used for the f solution behind the timing closure.
TIMING_X_MAX = 50.0


@dataclass
class TheoryPrediction:
    """Asymptotic description of one (regime, r, alpha_R, alpha_B) point.

    Attributes:
        regime: Declared regime
        r: Activation threshold
        alpha_r: Red seed density
        alpha_b: Black seed density
        z_r: Smaller zero of beta_R (q = g, alpha_R <= 1 only)
        z_b: Smaller zero of beta_B (q = g, alpha_B <= 1 only)
        w_b: Larger zero of beta_B (q = g, alpha_B <= 1 only)
        kappa_g: Blow-up time of g_R, None when unbounded
        g_b_at_kappa_g: Limit of the black component of g
        kappa_f: End of the domain of f, None when unbounded
        limit_ar: Limit of A_R* divided by ``ar_scale``
        ar_scale: "q" (subcritical) or "n" (red percolates)
        limit_ab_over_q: Limit of A_B* / q
        eta: Timing scale factor, when n and p are known
        estimated: True when the black limit is a numeric estimate
        source: "numeric" or "closed_form"
        timing: kappa -> limit of eta * T_{floor(kappa q)}
    """

    regime: Regime
    r: int
    alpha_r: float
    alpha_b: float
    limit_ar: float
    ar_scale: str
    limit_ab_over_q: float
    z_r: Optional[float] = None
    z_b: Optional[float] = None
    w_b: Optional[float] = None
    kappa_g: Optional[float] = None
    g_b_at_kappa_g: Optional[float] = None
    kappa_f: Optional[float] = None
    eta: Optional[float] = None
    estimated: bool = False
    source: str = "numeric"
    timing: Optional[Callable[[float], float]] = field(default=None, repr=False)

    @property
    def subcritical(self) -> bool:
        return self.ar_scale == "q"

    def timing_tau(self, kappa: float) -> float:
        """Limit of eta * T_{floor(kappa q)}.

        Raises:
            DomainError: If no timing integral is attached
        """
        if self.timing is None:
            raise DomainError("this prediction carries no timing integral")
        return self.timing(kappa)

    def to_dict(self) -> Dict[str, Any]:
        """JSON object; unbounded kappas are null with an explicit flag."""
        return {
            "regime": self.regime.value,
            "r": self.r,
            "alpha_R": self.alpha_r,
            "alpha_B": self.alpha_b,
            "z_R": self.z_r,
            "z_B": self.z_b,
            "w_B": self.w_b,
            "kappa_g": self.kappa_g,
            "kappa_g_unbounded": self.kappa_g is None,
            "g_B_at_kappa_g": self.g_b_at_kappa_g,
            "kappa_f": self.kappa_f,
            "kappa_f_unbounded": self.kappa_f is None,
            "limit_AR": self.limit_ar,
            "AR_scale": self.ar_scale,
            "limit_AB_over_q": self.limit_ab_over_q,
            "eta": self.eta,
            "estimated": self.estimated,
            "source": self.source,
        }


def timing_closure(spec: BetaSpec) -> Callable[[float], float]:
    """kappa -> limit of eta * T_{floor(kappa q)}, solving f once and reusing it."""
    cache: Dict[str, OdeSolution] = {}

    def tau(kappa: float) -> float:
        f = cache.get("f")
        if f is None or f.x_end < kappa:
            f = solve_f(spec, max(kappa, TIMING_X_MAX))
            cache["f"] = f
        return timing_tau(spec, kappa, f)

    return tau


def predict(
    regime_spec: RegimeSpec,
    r: int,
    n: Optional[int] = None,
    p: Optional[float] = None,
) -> TheoryPrediction:
    """Limit of the final counts for a declared regime.

    Args:
        regime_spec: Regime, seed densities and q
        r: Activation threshold
        n: Number of nodes (only needed for eta)
        p: Edge probability (only needed for eta)

    Returns:
        TheoryPrediction with every field the regime defines

    Raises:
        IntegrationFailure: If g_B(kappa_g) fails to stay below z_B
    """
    spec = BetaSpec.from_regime(regime_spec, r)
    regime = spec.regime
    eta = eta_factor(regime, n, p, regime_spec.q, r) if n and p else None
    common = dict(
        regime=regime,
        r=r,
        alpha_r=spec.alpha_r,
        alpha_b=spec.alpha_b,
        eta=eta,
        timing=timing_closure(spec),
    )

    if regime is Regime.Q_EQUALS_G:
        z_r, _ = beta_zeros(spec, NodeColor.RED)
        z_b, w_b = beta_zeros(spec, NodeColor.BLACK)
        if z_r is not None:
            prediction = TheoryPrediction(
                limit_ar=spec.alpha_r + z_r,
                ar_scale="q",
                limit_ab_over_q=spec.alpha_b + z_b,
                z_r=z_r,
                z_b=z_b,
                w_b=w_b,
                g_b_at_kappa_g=z_b,
                kappa_f=kappa_f(spec),
                **common,
            )
        else:
            kappa = kappa_integral(spec, NodeColor.RED)
            g_b = terminal_b(spec, kappa)
            if z_b is not None:
                if not g_b < z_b:
                    raise IntegrationFailure(f"g_B(kappa_g) = {g_b} is not below z_B = {z_b}")
                if z_b - g_b < ZERO_MARGIN:
                    logger.warning(f"g_B(kappa_g) within {ZERO_MARGIN} of z_B; kappa_g = {kappa}")
            prediction = TheoryPrediction(
                limit_ar=1.0,
                ar_scale="n",
                limit_ab_over_q=spec.alpha_b + g_b,
                z_b=z_b,
                w_b=w_b,
                kappa_g=kappa,
                g_b_at_kappa_g=g_b,
                **common,
            )
    elif regime is Regime.G_LL_Q_LL_PINV:
        g_b = terminal_b(spec, kappa_h(spec.alpha_r, r))
        prediction = TheoryPrediction(
            limit_ar=1.0,
            ar_scale="n",
            limit_ab_over_q=spec.alpha_b + g_b,
            kappa_g=kappa_h(spec.alpha_r, r),
            g_b_at_kappa_g=g_b,
            **common,
        )
    elif regime is Regime.Q_EQUALS_PINV:
        overline_b = estimate_overline_b(spec)
        prediction = TheoryPrediction(
            limit_ar=1.0,
            ar_scale="n",
            limit_ab_over_q=spec.alpha_b + overline_b,
            g_b_at_kappa_g=overline_b,
            estimated=True,
            **common,
        )
    else:
        prediction = TheoryPrediction(
            limit_ar=1.0,
            ar_scale="n",
            limit_ab_over_q=spec.alpha_b,
            g_b_at_kappa_g=0.0,
            **common,
        )
    logger.debug(f"Prediction for {regime_spec.to_dict()}: {prediction.to_dict()}")
    return prediction


def _format(value: Optional[float]) -> str:
    if value is None:
        return "+inf"
    if isinstance(value, float) and math.isinf(value):
        return "+inf"
    return f"{value:.6g}"


def theory_table(specs: Iterable[RegimeSpec], r: int) -> List[Dict[str, str]]:
    """Rows of kappa_f and the limits of f_R and f_B, one per regime spec.

    Estimated entries carry a trailing ``(est.)``.
    """
    rows = []
    for regime_spec in specs:
        prediction = predict(regime_spec, r)
        f_r_limit = prediction.z_r if prediction.subcritical else None
        f_b_limit = _format(prediction.g_b_at_kappa_g)
        if prediction.estimated:
            f_b_limit += " (est.)"
        rows.append(
            {
                "regime": regime_spec.regime.value,
                "alpha_R": f"{regime_spec.alpha_r:g}",
                "alpha_B": f"{regime_spec.alpha_b:g}",
                "kappa_f": _format(prediction.kappa_f),
                "f_R_limit": _format(f_r_limit),
                "f_B_limit": f_b_limit,
                "AB_over_q": _format(prediction.limit_ab_over_q),
            }
        )
    return rows

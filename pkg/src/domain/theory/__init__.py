"""Numeric engine for the asymptotic limits of the competing process."""

from src.domain.theory.beta import BetaSpec, beta, beta_color, beta_single, pi_s, skellam_tail
from src.domain.theory.bounds import TailKind, tail_bounds, zeta
from src.domain.theory.closed_form import (
    alpha_b_boundary_r2,
    black_limit_r2,
    closed_form_r2,
    kappa_g_r2,
    zeros_r2,
)
from src.domain.theory.ode import (
    OdeSolution,
    beta_integral,
    estimate_overline_b,
    h_closed_form,
    kappa_f,
    kappa_h,
    kappa_integral,
    solve_f,
    solve_g,
    terminal_b,
)
from src.domain.theory.prediction import TheoryPrediction, predict, theory_table
from src.domain.theory.timing import eta, timing_tau, timing_tau_color
from src.domain.theory.zeros import beta_minimum, beta_zeros, smallest_zero

__all__ = [
    "BetaSpec",
    "OdeSolution",
    "TailKind",
    "TheoryPrediction",
    "alpha_b_boundary_r2",
    "beta",
    "beta_color",
    "beta_integral",
    "beta_minimum",
    "beta_single",
    "beta_zeros",
    "black_limit_r2",
    "closed_form_r2",
    "estimate_overline_b",
    "eta",
    "h_closed_form",
    "kappa_f",
    "kappa_g_r2",
    "kappa_h",
    "kappa_integral",
    "pi_s",
    "predict",
    "skellam_tail",
    "smallest_zero",
    "solve_f",
    "solve_g",
    "tail_bounds",
    "terminal_b",
    "theory_table",
    "timing_tau",
    "timing_tau_color",
    "zeros_r2",
    "zeta",
]

"""Statistical and numeric check suites for the limit theorems.

Every suite runs a canonical instance and returns a SuiteReport with one
CheckResult per check. ``scale`` shrinks replication counts for smoke
runs; tolerances of the Monte Carlo suites are fixed at 10-15% (no finite-n
rates are known), except where noted.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np
from scipy import stats

from src.application.experiment_service import (
    ExperimentPlan,
    Statistic,
    parallel_map,
    run_plan,
)
from src.application.figures import Figure, figure_data
from src.domain.chain.simulator import run_chain
from src.domain.exact.simulator import run_coupled_pair, run_exact
from src.domain.models.params import ModelParams, NodeColor, Regime, RegimeSpec
from src.domain.models.results import ModeSpec, StopKind, StopRule
from src.domain.theory.beta import BetaSpec, pi_s
from src.domain.theory.closed_form import black_limit_r2, kappa_g_r2, zeros_r2
from src.domain.theory.ode import kappa_integral, terminal_b
from src.domain.theory.prediction import predict
from src.domain.theory.timing import color_identity_gap
from src.domain.theory.zeros import beta_zeros
from src.infrastructure.export import provenance
from src.infrastructure.rng import RngStream

logger = logging.getLogger(__name__)

# Canonical instance of the statistical suites: g = 500.
CANONICAL_N = 100_000
CANONICAL_P = 1e-4

BINOMIAL_CHECKPOINTS = (5, 50, 200)
MIN_EXPECTED = 5.0
CHI_SQUARE_LEVEL = 1e-3

ORACLE_TV = 0.02

CLOSED_FORM_LATTICE = tuple(
    (alpha_r, alpha_b)
    for alpha_r in (1.25, 1.75, 2.5, 3.5, 4.75)
    for alpha_b in (0.2, 0.6, 0.9, 1.15)
)


class Suite(Enum):
    SUBCRITICAL = "subcritical"
    SUPERCRITICAL_QG = "supercritical_qg"
    SUPERCRITICAL_QGG = "supercritical_qgg"
    TIMING = "timing"
    BINOMIAL_LAW = "binomial_law"
    STOCHASTIC_BOUNDS = "stochastic_bounds"
    COUPLINGS = "couplings"
    ORACLE = "oracle"
    CLOSED_FORM = "closed_form"
    FIGURE1 = "figure1"


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one check.

    Attributes:
        name: What was checked
        passed: Whether the measured value met the target
        measured: Measured value
        target: Theory target or bound
        tolerance: Allowed deviation (relative for "rel", absolute otherwise)
        note: How the tolerance is applied
    """

    name: str
    passed: bool
    measured: float
    target: float
    tolerance: float
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "target": self.target,
            "tolerance": self.tolerance,
            "note": self.note,
        }


@dataclass
class SuiteReport:
    suite: Suite
    scale: float
    seed: int
    checks: List[CheckResult] = field(default_factory=list)

    CSV_HEADER = ("suite", "check", "passed", "measured", "target", "tolerance", "note")

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def rows(self) -> Iterable[Tuple[Any, ...]]:
        for check in self.checks:
            yield (
                self.suite.value,
                check.name,
                check.passed,
                check.measured,
                check.target,
                check.tolerance,
                check.note,
            )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "provenance": provenance(self.seed, {"suite": self.suite.value, "scale": self.scale}),
            "suite": self.suite.value,
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
        }


def _replications(base: int, scale: float, minimum: int = 2) -> int:
    return max(minimum, round(base * scale))


def relative_check(name: str, measured: float, target: float, rel_tol: float) -> CheckResult:
    passed = math.isfinite(measured) and abs(measured - target) <= rel_tol * abs(target)
    return CheckResult(name, passed, measured, target, rel_tol, "rel")


def at_least(name: str, measured: float, bound: float) -> CheckResult:
    return CheckResult(name, measured >= bound, measured, bound, 0.0, ">=")


def at_most(name: str, measured: float, bound: float) -> CheckResult:
    return CheckResult(name, measured <= bound, measured, bound, 0.0, "<=")


def _canonical(
    regime: Regime, alpha_r: float, alpha_b: float, seed: int, q: Optional[float] = None
):
    spec = RegimeSpec.for_instance(regime, alpha_r, alpha_b, CANONICAL_N, CANONICAL_P, 2, q)
    a_r, a_b = spec.seed_counts()
    params = ModelParams(n=CANONICAL_N, p=CANONICAL_P, r=2, a_r=a_r, a_b=a_b, seed=seed)
    return params, spec


# ----------------------------------------------------------------------
# Limit theorems
# ----------------------------------------------------------------------


def check_subcritical(scale: float = 1.0, seed: int = 0, workers: Optional[int] = None):
    """alpha_R = 0.8, alpha_B = 0.5 at q = g: A_S*/g -> alpha_S + z_S, 10% tolerance."""
    params, spec = _canonical(Regime.Q_EQUALS_G, 0.8, 0.5, seed)
    prediction = predict(spec, 2, params.n, params.p)
    plan = ExperimentPlan(
        base=params,
        regime=spec,
        replications=_replications(200, scale),
        outputs=(Statistic.AR_OVER_Q, Statistic.AB_OVER_Q),
    )
    result = run_plan(plan, workers)
    return [
        relative_check(
            "mean A_R*/q", result.stat(Statistic.AR_OVER_Q).mean, prediction.limit_ar, 0.10
        ),
        relative_check(
            "mean A_B*/q", result.stat(Statistic.AB_OVER_Q).mean, prediction.limit_ab_over_q, 0.10
        ),
    ]


def check_supercritical_qg(scale: float = 1.0, seed: int = 0, workers: Optional[int] = None):
    """alpha_R = 2, alpha_B = 0.75 at q = g: red percolates, A_B*/q within 15%."""
    params, spec = _canonical(Regime.Q_EQUALS_G, 2.0, 0.75, seed)
    prediction = predict(spec, 2, params.n, params.p)
    plan = ExperimentPlan(
        base=params,
        regime=spec,
        replications=_replications(200, scale),
        outputs=(Statistic.AR_OVER_N, Statistic.AB_OVER_Q),
    )
    result = run_plan(plan, workers)
    return [
        at_least("mean A_R*/n", result.stat(Statistic.AR_OVER_N).mean, 0.99),
        relative_check(
            "mean A_B*/q", result.stat(Statistic.AB_OVER_Q).mean, prediction.limit_ab_over_q, 0.15
        ),
    ]


def check_supercritical_qgg(scale: float = 1.0, seed: int = 0, workers: Optional[int] = None):
    """q = 2000 between g and 1/p: red percolates and black stays o(n)."""
    params, spec = _canonical(Regime.G_LL_Q_LL_PINV, 1.5, 1.0, seed, q=2000.0)
    plan = ExperimentPlan(
        base=params,
        regime=spec,
        replications=_replications(100, scale),
        outputs=(Statistic.AR_OVER_N, Statistic.AB_OVER_N),
    )
    result = run_plan(plan, workers)
    return [
        at_least("mean A_R*/n", result.stat(Statistic.AR_OVER_N).mean, 0.99),
        at_most("mean A_B*/n", result.stat(Statistic.AB_OVER_N).mean, 0.05),
    ]


def check_timing(scale: float = 1.0, seed: int = 0, workers: Optional[int] = None):
    """eta * T_q for alpha_R = 2, alpha_B = 0.75 at q = g, within 15% of the integral."""
    params, spec = _canonical(Regime.Q_EQUALS_G, 2.0, 0.75, seed)
    prediction = predict(spec, 2, params.n, params.p)
    plan = ExperimentPlan(
        base=params,
        regime=spec,
        replications=_replications(200, scale),
        outputs=(Statistic.ETA_T_KAPPA,),
        kappa=1.0,
    )
    result = run_plan(plan, workers)
    return [
        relative_check(
            "mean eta*T_q", result.stat(Statistic.ETA_T_KAPPA).mean, prediction.timing_tau(1.0), 0.15
        )
    ]


def check_figure1(scale: float = 1.0, seed: int = 0, workers: Optional[int] = None):
    """Simulated A_B*/q against the closed-form curve, alpha_B in {0.5, 0.75}."""
    alpha_r_values = (1.5, 2.0, 2.5, 3.0, 3.5)
    rows = figure_data(
        Figure.FIG1,
        alpha_r_values,
        (0.5, 0.75),
        CANONICAL_N,
        CANONICAL_P,
        replications=_replications(50, scale),
        seed=seed,
        workers=workers,
    )
    checks = []
    for row in rows:
        half = (row.sim_ci_hi - row.sim_mean) if row.sim_ci_hi is not None else 0.0
        allowed = half + 0.15 * row.theory_limit
        checks.append(
            CheckResult(
                f"A_B*/q at alpha_R={row.alpha_r}, alpha_B={row.alpha_b}",
                abs(row.sim_mean - row.theory_limit) <= allowed,
                row.sim_mean,
                row.theory_limit,
                allowed,
                "abs, CI half-width + 15%",
            )
        )
    for alpha_b in (0.5, 0.75):
        curve = [row.theory_limit for row in rows if row.alpha_b == alpha_b]
        steps = np.diff(curve)
        checks.append(
            CheckResult(
                f"theory curve decreasing in alpha_R, alpha_B={alpha_b}",
                bool(np.all(steps < 0)),
                float(steps.max()),
                0.0,
                0.0,
                "largest step < 0",
            )
        )
    return checks


# ----------------------------------------------------------------------
# Binomial law of the suprathreshold counts
# ----------------------------------------------------------------------

BINOMIAL_PARAMS = ModelParams(n=500, p=0.02, r=2, a_r=20, a_b=8)
STOCHASTIC_BOUND_LEVEL = 1e-3
STOCHASTIC_BOUND_QUANTILE = 75


def _binomial_run(task: Tuple[int, int]) -> List[Tuple[int, int, int, int, int]]:
    seed, replication = task
    result = run_chain(
        BINOMIAL_PARAMS,
        RngStream(seed, (0, replication)),
        ModeSpec.prolonged(),
        full_tracking=True,
        checkpoints=BINOMIAL_CHECKPOINTS,
        max_steps=max(BINOMIAL_CHECKPOINTS),
    )
    return [(c.k, c.n_r, c.n_b, c.susceptible_r, c.susceptible_b) for c in result.checkpoints]


def _binomial_snapshots(seed: int, replications: int, workers: Optional[int]):
    runs = parallel_map(_binomial_run, [(seed, j) for j in range(replications)], workers)
    return [row for run in runs for row in run]


def merged_chisquare(values: np.ndarray, trials: int, prob: float) -> Tuple[float, int]:
    """Chi-square p-value of ``values`` against Bin(trials, prob).

    Adjacent support points are merged until each bin expects at least
    MIN_EXPECTED counts. Returns (p-value, number of bins); a single bin
    gives p-value 1.
    """
    values = np.asarray(values, dtype=int)
    observed = np.bincount(values, minlength=trials + 1)[: trials + 1]
    expected = stats.binom.pmf(np.arange(trials + 1), trials, prob) * len(values)
    bins_obs: List[float] = []
    bins_exp: List[float] = []
    acc_o = acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= MIN_EXPECTED:
            bins_obs.append(acc_o)
            bins_exp.append(acc_e)
            acc_o = acc_e = 0.0
    if bins_obs:
        bins_obs[-1] += acc_o
        bins_exp[-1] += acc_e
    else:
        bins_obs, bins_exp = [acc_o], [acc_e]
    if len(bins_obs) < 2:
        return 1.0, len(bins_obs)
    f_exp = np.asarray(bins_exp) * (sum(bins_obs) / sum(bins_exp))
    return float(stats.chisquare(bins_obs, f_exp).pvalue), len(bins_obs)


def check_binomial_law(scale: float = 1.0, seed: int = 0, workers: Optional[int] = None):
    """|S_R[k]| and |S_B[k]| given N[k] against Bin(n_W, pi_S) for k in 5, 50, 200."""
    params = BINOMIAL_PARAMS
    rows = _binomial_snapshots(seed, _replications(5000, scale, minimum=200), workers)

    checks = []
    for k in BINOMIAL_CHECKPOINTS:
        at_k = [row for row in rows if row[0] == k]
        cells = Counter((n_r, n_b) for _, n_r, n_b, _, _ in at_k)
        if not cells:
            checks.append(CheckResult(f"|S[{k}]| binomial", False, 0.0, CHI_SQUARE_LEVEL, 0.0))
            continue
        (k_r, k_b), count = cells.most_common(1)[0]
        in_cell = [row for row in at_k if (row[1], row[2]) == (k_r, k_b)]
        for color, column, label in ((NodeColor.RED, 3, "S_R"), (NodeColor.BLACK, 4, "S_B")):
            values = np.array([row[column] for row in in_cell])
            prob = pi_s(k_r, k_b, params.a_r, params.a_b, params.p, params.r, color)
            pvalue, bins = merged_chisquare(values, params.n_white, prob)
            checks.append(
                CheckResult(
                    f"|{label}[{k}]| given N[{k}]=({k_r},{k_b}), {count} runs",
                    pvalue > CHI_SQUARE_LEVEL,
                    pvalue,
                    CHI_SQUARE_LEVEL,
                    0.0,
                    f"chi-square p-value > level, {bins} bins",
                )
            )
    return checks


def dkw_epsilon(count: int, level: float = STOCHASTIC_BOUND_LEVEL) -> float:
    """Two-sided DKW band half-width for ``count`` samples at ``level``."""
    if count < 1:
        raise ValueError("count must be positive")
    return math.sqrt(math.log(2.0 / level) / (2.0 * count))


def cdf_excess(values: np.ndarray, trials: int, prob: float) -> Tuple[float, float]:
    """Largest excesses of the empirical CDF over Bin(trials, prob) and back.

    Returns (max F_emp - F_bin, max F_bin - F_emp) over the support 0..trials.
    """
    values = np.asarray(values, dtype=int)
    support = np.arange(trials + 1)
    empirical = np.searchsorted(np.sort(values), support, side="right") / len(values)
    binomial = stats.binom.cdf(support, trials, prob)
    return float(np.max(empirical - binomial)), float(np.max(binomial - empirical))


def check_stochastic_bounds(scale: float = 1.0, seed: int = 0, workers: Optional[int] = None):
    """Given N_B[k] <= h, |S_R[k]| dominates Bin(n_W, pi_R(k-h, h)) and
    |S_B[k]| is dominated by Bin(n_W, pi_B(k-h, h)), up to a DKW band.

    h is the 75th percentile of N_B[k] over the runs.
    """
    params = BINOMIAL_PARAMS
    rows = _binomial_snapshots(seed + 1, _replications(5000, scale, minimum=200), workers)

    checks = []
    for k in BINOMIAL_CHECKPOINTS:
        at_k = [row for row in rows if row[0] == k]
        if not at_k:
            checks.append(CheckResult(f"stochastic bounds at k={k}", False, 0.0, 0.0, 0.0))
            continue
        h = int(np.percentile([row[2] for row in at_k], STOCHASTIC_BOUND_QUANTILE))
        given = [row for row in at_k if row[2] <= h]
        epsilon = dkw_epsilon(len(given))
        red_prob = pi_s(k - h, h, params.a_r, params.a_b, params.p, params.r, NodeColor.RED)
        black_prob = pi_s(k - h, h, params.a_r, params.a_b, params.p, params.r, NodeColor.BLACK)
        red_excess, _ = cdf_excess(np.array([row[3] for row in given]), params.n_white, red_prob)
        _, black_excess = cdf_excess(
            np.array([row[4] for row in given]), params.n_white, black_prob
        )
        checks.append(
            CheckResult(
                f"|S_R[{k}]| >=st Bin given N_B[{k}]<={h}, {len(given)} runs",
                red_excess <= epsilon,
                red_excess,
                0.0,
                epsilon,
                "max(F_emp - F_bin) <= DKW epsilon",
            )
        )
        checks.append(
            CheckResult(
                f"|S_B[{k}]| <=st Bin given N_B[{k}]<={h}, {len(given)} runs",
                black_excess <= epsilon,
                black_excess,
                0.0,
                epsilon,
                "max(F_bin - F_emp) <= DKW epsilon",
            )
        )
    return checks


# ----------------------------------------------------------------------
# Couplings
# ----------------------------------------------------------------------

COUPLING_PARAMS = ModelParams(n=200, p=0.03, r=2, a_r=4, a_b=6)
COUPLING_STOP_STEP = 10


def _coupling_pair(task: Tuple[int, int, str]) -> bool:
    seed, index, kind = task
    base = COUPLING_PARAMS
    rng = RngStream(seed, (1, index))
    if kind == "more_red":
        first, second = run_coupled_pair(base, base.with_seeds(base.a_r + 2, base.a_b), rng)
        return second.a_r_star >= first.a_r_star and second.a_b_star <= first.a_b_star
    if kind == "less_black":
        first, second = run_coupled_pair(base, base.with_seeds(base.a_r, base.a_b - 3), rng)
        return second.a_r_star >= first.a_r_star and second.a_b_star <= first.a_b_star
    stopped = ModeSpec.stopped(StopRule(StopKind.STEP, COUPLING_STOP_STEP))
    first, second = run_coupled_pair(base, base, rng, ModeSpec.standard(), stopped)
    return second.a_b_star >= first.a_b_star


def check_couplings(scale: float = 1.0, seed: int = 0, workers: Optional[int] = None):
    """Seed monotonicity and stopped dominance on every coupled pair."""
    pairs = _replications(1000, scale, minimum=20)
    checks = []
    for kind, label in (
        ("more_red", "adding red seeds"),
        ("less_black", "removing black seeds"),
        ("stopped", "stopped run dominates black"),
    ):
        tasks = [(seed, index, kind) for index in range(pairs)]
        outcomes = parallel_map(_coupling_pair, tasks, workers)
        share = sum(outcomes) / len(outcomes)
        checks.append(
            CheckResult(f"{label}, {pairs} pairs", share == 1.0, share, 1.0, 0.0, "share of pairs")
        )
    return checks


# ----------------------------------------------------------------------
# Oracle equivalence
# ----------------------------------------------------------------------

ORACLE_PARAMS = ModelParams(n=8, p=0.5, r=2, a_r=2, a_b=1)
ORACLE_BATCH = 2000

ORACLE_MODES = {
    "standard": ModeSpec.standard(),
    "stopped": ModeSpec.stopped(StopRule(StopKind.STEP, 2)),
    "prolonged": ModeSpec.prolonged(),
}


def _oracle_batch(task: Tuple[int, str, str, int, int]) -> Dict[Tuple[int, ...], int]:
    seed, simulator, mode_name, start, count = task
    mode = ORACLE_MODES[mode_name]
    mode_id = list(ORACLE_MODES).index(mode_name)
    sim_id = 0 if simulator == "exact" else 1
    outcomes: Counter = Counter()
    for j in range(start, start + count):
        rng = RngStream(seed, (2, sim_id, mode_id, j))
        if simulator == "exact":
            result = run_exact(ORACLE_PARAMS, rng, mode)
        else:
            result = run_chain(ORACLE_PARAMS, rng, mode)
        key = (result.a_r_star, result.a_b_star)
        if result.prolonged is not None:
            key += (result.prolonged.n_r, result.prolonged.n_b)
        outcomes[key] += 1
    return dict(outcomes)


def total_variation(first: Dict[Any, int], second: Dict[Any, int]) -> float:
    """TV distance between two empirical laws given as outcome counts."""
    n_first, n_second = sum(first.values()), sum(second.values())
    keys = set(first) | set(second)
    return 0.5 * sum(abs(first.get(k, 0) / n_first - second.get(k, 0) / n_second) for k in keys)


def _oracle_law(seed, simulator, mode_name, runs, workers) -> Dict[Any, int]:
    tasks = [
        (seed, simulator, mode_name, start, min(ORACLE_BATCH, runs - start))
        for start in range(0, runs, ORACLE_BATCH)
    ]
    law: Counter = Counter()
    for batch in parallel_map(_oracle_batch, tasks, workers):
        law.update(batch)
    return dict(law)


def check_oracle(scale: float = 1.0, seed: int = 0, workers: Optional[int] = None):
    """Joint law of final counts, chain vs exact on n = 8, per run mode.

    The TV tolerance grows as 1/sqrt(scale), matching the Monte Carlo noise.
    """
    runs = _replications(200_000, scale, minimum=1000)
    tolerance = ORACLE_TV / math.sqrt(min(scale, 1.0))
    checks = []
    for mode_name in ORACLE_MODES:
        exact = _oracle_law(seed, "exact", mode_name, runs, workers)
        chain = _oracle_law(seed, "chain", mode_name, runs, workers)
        distance = total_variation(exact, chain)
        checks.append(
            CheckResult(
                f"TV(exact, chain), {mode_name}, {runs} runs",
                distance < tolerance,
                distance,
                0.0,
                tolerance,
                "abs",
            )
        )
    return checks


# ----------------------------------------------------------------------
# Closed forms against the numeric route
# ----------------------------------------------------------------------


def _max_gap(name: str, gaps: List[float], tolerance: float) -> CheckResult:
    worst = max(gaps) if gaps else 0.0
    return CheckResult(name, worst <= tolerance, worst, 0.0, tolerance, "max abs over lattice")


def check_closed_form(scale: float = 1.0, seed: int = 0, workers: Optional[int] = None):
    """r = 2 closed forms vs quadrature and ODE values on a 20-point lattice."""
    kappa_gaps, terminal_gaps, zero_gaps, limit_gaps = [], [], [], []
    for alpha_r, alpha_b in CLOSED_FORM_LATTICE:
        spec = BetaSpec(Regime.Q_EQUALS_G, 2, alpha_r, alpha_b)
        kappa = kappa_integral(spec, NodeColor.RED)
        kappa_gaps.append(abs(kappa - kappa_g_r2(alpha_r)))
        limit = black_limit_r2(alpha_r, alpha_b)
        terminal_gaps.append(abs(terminal_b(spec, kappa) - (limit - alpha_b)))
        regime = RegimeSpec(Regime.Q_EQUALS_G, alpha_r, alpha_b, 500.0)
        limit_gaps.append(abs(predict(regime, 2).limit_ab_over_q - limit))
        if alpha_b < 1.0:
            z_b, w_b = beta_zeros(spec, NodeColor.BLACK)
            closed_z, closed_w = zeros_r2(alpha_b)
            zero_gaps.extend([abs(z_b - closed_z), abs(w_b - closed_w)])

    spec = BetaSpec(Regime.Q_EQUALS_G, 2, 2.0, 0.75)
    identity_gaps = [
        color_identity_gap(spec, NodeColor.RED, 1.0),
        color_identity_gap(spec, NodeColor.BLACK, 0.1),
    ]
    return [
        _max_gap("kappa_g", kappa_gaps, 1e-6),
        _max_gap("g_B(kappa_g)", terminal_gaps, 1e-6),
        _max_gap("zeros of beta_B", zero_gaps, 1e-6),
        _max_gap("limit A_B*/q", limit_gaps, 1e-6),
        _max_gap("timing identity", identity_gaps, 1e-7),
    ]


SUITES: Dict[Suite, Callable[..., List[CheckResult]]] = {
    Suite.SUBCRITICAL: check_subcritical,
    Suite.SUPERCRITICAL_QG: check_supercritical_qg,
    Suite.SUPERCRITICAL_QGG: check_supercritical_qgg,
    Suite.TIMING: check_timing,
    Suite.BINOMIAL_LAW: check_binomial_law,
    Suite.STOCHASTIC_BOUNDS: check_stochastic_bounds,
    Suite.COUPLINGS: check_couplings,
    Suite.ORACLE: check_oracle,
    Suite.CLOSED_FORM: check_closed_form,
    Suite.FIGURE1: check_figure1,
}


def theorem_checks(
    suite: Suite, scale: float = 1.0, seed: int = 0, workers: Optional[int] = None
) -> SuiteReport:
    """Run one suite.

    Args:
        suite: Which suite
        scale: Replication multiplier in (0, 1] for smoke runs
        seed: Master seed
        workers: Process count (default from settings)

    Returns:
        SuiteReport; ``report.passed`` is True iff every check passed
    """
    if not 0 < scale <= 1:
        raise ValueError(f"scale must lie in (0, 1], got {scale}")
    logger.info(f"Running suite {suite.value} (scale={scale}, seed={seed})")
    report = SuiteReport(suite=suite, scale=scale, seed=seed)
    report.checks.extend(SUITES[suite](scale=scale, seed=seed, workers=workers))
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        logger.info(f"{status} {check.name}: measured {check.measured:.6g}, target {check.target:.6g}")
    return report

"""Monte Carlo harness: sweeps, parallel replications and aggregation.

Replication j at sweep point i always draws from RngStream(master, (i, j)),
so results do not depend on the worker count or on scheduling. Workers
return immutable RunRecords; a single reducer folds them in (i, j) order.
"""

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
from scipy import stats

from src.domain.chain.simulator import run_chain
from src.domain.core.validation import g_critical
from src.domain.exact.simulator import run_exact
from src.domain.models.errors import BudgetExceeded, ConfigError, DomainError, IntegrationFailure
from src.domain.models.params import ModelParams, Regime, RegimeSpec
from src.domain.models.results import ModeSpec
from src.domain.theory.prediction import TheoryPrediction, predict
from src.domain.theory.timing import eta as eta_factor
from src.infrastructure.config import get_settings
from src.infrastructure.export import provenance
from src.infrastructure.rng import RngStream

logger = logging.getLogger(__name__)

# Keys a sweep may vary.
SWEEPABLE = ("n", "p", "r", "a_R", "a_B", "alpha_R", "alpha_B", "q")

# Sweeping any of these re-derives seed counts from the regime.
REGIME_KEYS = ("n", "p", "r", "alpha_R", "alpha_B", "q")

CONFIDENCE = 0.95

T = TypeVar("T")
R = TypeVar("R")


class Simulator(Enum):
    """Which simulator a plan runs."""

    EXACT = "exact"
    CHAIN = "chain"


class Statistic(Enum):
    """Per-run quantities a plan can aggregate."""

    AR_OVER_Q = "AR_over_q"
    AB_OVER_Q = "AB_over_q"
    AR_OVER_N = "AR_over_n"
    AB_OVER_N = "AB_over_n"
    K_OVER_Q = "K_over_q"
    ETA_T_KAPPA = "eta_T_kappa"
    T_K_STAR = "T_K_star"


DEFAULT_OUTPUTS = (Statistic.AR_OVER_Q, Statistic.AB_OVER_Q, Statistic.AR_OVER_N)


@dataclass(frozen=True)
class ExperimentPlan:
    """A sweep of instances, each simulated ``replications`` times.

    Attributes:
        base: Instance template; base.seed is the master seed
        regime: Declared regime (sets q and derives seed counts)
        sweep: Axes as (key, values); points are their Cartesian product
        replications: Runs per sweep point
        simulator: Exact or chain
        mode: Run mode shared by every run
        outputs: Statistics to aggregate
        kappa: Activation index (in units of q) for ETA_T_KAPPA

    Raises:
        ConfigError: On unknown sweep keys or replications < 1
    """

    base: ModelParams
    regime: Optional[RegimeSpec] = None
    sweep: Tuple[Tuple[str, Tuple[float, ...]], ...] = ()
    replications: int = 1
    simulator: Simulator = Simulator.CHAIN
    mode: ModeSpec = field(default_factory=ModeSpec.standard)
    outputs: Tuple[Statistic, ...] = DEFAULT_OUTPUTS
    kappa: float = 1.0

    def __post_init__(self):
        if self.replications < 1:
            raise ConfigError(f"replications must be >= 1, got {self.replications}")
        for key, values in self.sweep:
            if key not in SWEEPABLE:
                raise ConfigError(f"cannot sweep over {key!r}; choose from {', '.join(SWEEPABLE)}")
            if not values:
                raise ConfigError(f"sweep {key!r} has no values")
            if key in ("alpha_R", "alpha_B", "q") and self.regime is None:
                raise ConfigError(f"sweeping {key!r} needs a declared regime")

    @property
    def master_seed(self) -> int:
        return self.base.seed

    @property
    def size(self) -> int:
        """Number of sweep points."""
        return math.prod(len(values) for _, values in self.sweep) if self.sweep else 1

    def points(self) -> List[Dict[str, float]]:
        """Sweep assignments in row-major order of the axes."""
        if not self.sweep:
            return [{}]
        keys = [key for key, _ in self.sweep]
        return [dict(zip(keys, combo)) for combo in itertools.product(*(v for _, v in self.sweep))]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": self.base.to_dict(),
            "regime": self.regime.to_dict() if self.regime else None,
            "sweep": {key: list(values) for key, values in self.sweep},
            "replications": self.replications,
            "simulator": self.simulator.value,
            "mode": self.mode.mode.value,
            "stop_rule": self.mode.stop_rule.to_dict() if self.mode.stop_rule else None,
            "outputs": [stat.value for stat in self.outputs],
            "kappa": self.kappa,
        }


def point_instance(
    plan: ExperimentPlan, assignment: Dict[str, float]
) -> Tuple[ModelParams, Optional[RegimeSpec]]:
    """Instance and regime at one sweep point."""
    base = plan.base
    n = int(assignment.get("n", base.n))
    p = float(assignment.get("p", base.p))
    r = int(assignment.get("r", base.r))
    regime = plan.regime
    if regime is not None:
        q = assignment.get("q")
        if q is None and regime.regime in (Regime.G_LL_Q_LL_PINV, Regime.PINV_LL_Q_LL_N):
            q = regime.q
        regime = RegimeSpec.for_instance(
            regime.regime,
            float(assignment.get("alpha_R", regime.alpha_r)),
            float(assignment.get("alpha_B", regime.alpha_b)),
            n,
            p,
            r,
            q,
        )
    a_r, a_b = base.a_r, base.a_b
    if regime is not None and any(key in assignment for key in REGIME_KEYS):
        a_r, a_b = regime.seed_counts()
    a_r = int(assignment.get("a_R", a_r))
    a_b = int(assignment.get("a_B", a_b))
    return ModelParams(n=n, p=p, r=r, a_r=a_r, a_b=a_b, seed=base.seed), regime


# ----------------------------------------------------------------------
# Workers
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class RunTask:
    """Everything one worker needs for one replication."""

    point: int
    replication: int
    params: ModelParams
    regime: Optional[RegimeSpec]
    simulator: Simulator
    mode: ModeSpec
    kappa_step: Optional[int] = None


@dataclass(frozen=True)
class RunRecord:
    """Immutable outcome of one replication."""

    point: int
    replication: int
    a_r_star: int
    a_b_star: int
    k_star: int
    t_k_star: float
    t_kappa: Optional[float] = None


def _execute_task(task: RunTask) -> RunRecord:
    rng = RngStream(task.params.seed, (task.point, task.replication))
    checkpoints = (task.kappa_step,) if task.kappa_step is not None else ()
    if task.simulator is Simulator.EXACT:
        result = run_exact(task.params, rng, task.mode, checkpoints=checkpoints)
    else:
        result = run_chain(task.params, rng, task.mode, task.regime, checkpoints=checkpoints)
    t_kappa = None
    if task.kappa_step is not None:
        snapshot = result.checkpoint(task.kappa_step)
        t_kappa = snapshot.t if snapshot is not None else None
    return RunRecord(
        point=task.point,
        replication=task.replication,
        a_r_star=result.a_r_star,
        a_b_star=result.a_b_star,
        k_star=result.k_star,
        t_k_star=result.t_k_star,
        t_kappa=t_kappa,
    )


def parallel_map(
    function: Callable[[T], R], tasks: Sequence[T], workers: Optional[int] = None
) -> List[R]:
    """Map ``function`` over tasks in order, on a process pool when it pays off.

    ``function`` must be a picklable top-level callable.
    """
    workers = workers if workers is not None else get_settings().worker_count()
    if workers <= 1 or len(tasks) <= 1:
        return [function(task) for task in tasks]
    chunksize = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, tasks, chunksize=chunksize))


# ----------------------------------------------------------------------
# Aggregation
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class StatSummary:
    """Mean, spread and Student-t interval of one statistic at one point.

    ``std`` and the interval are None when fewer than two values exist.
    """

    mean: float
    std: Optional[float]
    count: int
    ci_lo: Optional[float]
    ci_hi: Optional[float]
    theory: Optional[float] = None

    @property
    def discrepancy(self) -> Optional[float]:
        """(mean - theory) / theory, None without a nonzero theory value."""
        if self.theory is None or self.theory == 0:
            return None
        return (self.mean - self.theory) / self.theory

    @classmethod
    def from_values(cls, values: Sequence[float], theory: Optional[float] = None) -> "StatSummary":
        data = np.asarray([v for v in values if v is not None and math.isfinite(v)], dtype=float)
        count = len(data)
        if count == 0:
            return cls(math.nan, None, 0, None, None, theory)
        mean = float(data.mean())
        if count < 2:
            return cls(mean, None, count, None, None, theory)
        std = float(data.std(ddof=1))
        half = float(stats.t.ppf(0.5 + CONFIDENCE / 2, count - 1)) * std / math.sqrt(count)
        return cls(mean, std, count, mean - half, mean + half, theory)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mean": self.mean,
            "std": self.std,
            "count": self.count,
            "ci_lo": self.ci_lo,
            "ci_hi": self.ci_hi,
            "theory": self.theory,
            "discrepancy": self.discrepancy,
        }


@dataclass
class PointSummary:
    """Aggregates at one sweep point."""

    index: int
    assignment: Dict[str, float]
    params: ModelParams
    regime: Optional[RegimeSpec]
    q: float
    stats: Dict[Statistic, StatSummary]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "assignment": dict(self.assignment),
            "params": self.params.to_dict(),
            "regime": self.regime.to_dict() if self.regime else None,
            "q": self.q,
            "stats": {stat.value: summary.to_dict() for stat, summary in self.stats.items()},
        }


@dataclass
class AggregateResult:
    """Aggregated outcome of a plan."""

    plan: ExperimentPlan
    points: List[PointSummary]

    CSV_HEADER = (
        "point",
        "n",
        "p",
        "r",
        "a_R",
        "a_B",
        "q",
        "statistic",
        "mean",
        "std",
        "count",
        "ci_lo",
        "ci_hi",
        "theory",
        "discrepancy",
    )

    def stat(self, statistic: Statistic, point: int = 0) -> StatSummary:
        return self.points[point].stats[statistic]

    def rows(self) -> Iterable[Tuple[Any, ...]]:
        for point in self.points:
            params = point.params
            for statistic, summary in point.stats.items():
                yield (
                    point.index,
                    params.n,
                    params.p,
                    params.r,
                    params.a_r,
                    params.a_b,
                    point.q,
                    statistic.value,
                    summary.mean,
                    summary.std,
                    summary.count,
                    summary.ci_lo,
                    summary.ci_hi,
                    summary.theory,
                    summary.discrepancy,
                )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "provenance": provenance(self.plan.master_seed, self.plan.to_dict()),
            "points": [point.to_dict() for point in self.points],
        }


def _theory_value(
    statistic: Statistic, prediction: Optional[TheoryPrediction], kappa: float
) -> Optional[float]:
    if prediction is None:
        return None
    if statistic is Statistic.AR_OVER_Q and prediction.ar_scale == "q":
        return prediction.limit_ar
    if statistic is Statistic.AR_OVER_N and prediction.ar_scale == "n":
        return prediction.limit_ar
    if statistic is Statistic.AB_OVER_Q:
        return prediction.limit_ab_over_q
    if statistic is Statistic.K_OVER_Q:
        return prediction.kappa_f
    if statistic is Statistic.ETA_T_KAPPA:
        try:
            return prediction.timing_tau(kappa)
        except DomainError:
            return None
    return None


def _statistic_value(
    statistic: Statistic, record: RunRecord, params: ModelParams, q: float, eta: Optional[float]
) -> Optional[float]:
    if statistic is Statistic.AR_OVER_Q:
        return record.a_r_star / q
    if statistic is Statistic.AB_OVER_Q:
        return record.a_b_star / q
    if statistic is Statistic.AR_OVER_N:
        return record.a_r_star / params.n
    if statistic is Statistic.AB_OVER_N:
        return record.a_b_star / params.n
    if statistic is Statistic.K_OVER_Q:
        return record.k_star / q
    if statistic is Statistic.ETA_T_KAPPA:
        if record.t_kappa is None or eta is None:
            return None
        return eta * record.t_kappa
    return record.t_k_star


def check_budget(plan: ExperimentPlan, budget: Optional[int] = None) -> None:
    """Raise BudgetExceeded when replications x points exceeds the budget."""
    budget = budget if budget is not None else get_settings().budget
    total = plan.replications * plan.size
    if total > budget:
        raise BudgetExceeded(
            f"plan needs {total} runs ({plan.size} points x {plan.replications}), budget is {budget}"
        )


def run_plan(plan: ExperimentPlan, workers: Optional[int] = None) -> AggregateResult:
    """Run every replication of every sweep point and aggregate.

    Args:
        plan: Experiment plan
        workers: Process count (default from settings; 1 runs in-process)

    Returns:
        AggregateResult with one PointSummary per sweep point

    Raises:
        BudgetExceeded: If the plan exceeds the configured budget
    """
    check_budget(plan)
    instances = []
    tasks: List[RunTask] = []
    for index, assignment in enumerate(plan.points()):
        params, regime = point_instance(plan, assignment)
        q = regime.q if regime is not None else None
        kappa_step = None
        if Statistic.ETA_T_KAPPA in plan.outputs and q is not None:
            kappa_step = max(1, math.floor(plan.kappa * q))
        instances.append((assignment, params, regime))
        tasks.extend(
            RunTask(index, j, params, regime, plan.simulator, plan.mode, kappa_step)
            for j in range(plan.replications)
        )

    logger.info(
        f"Running {len(tasks)} {plan.simulator.value} runs over {plan.size} point(s), "
        f"master seed {plan.master_seed}"
    )
    records = parallel_map(_execute_task, tasks, workers)
    records.sort(key=lambda record: (record.point, record.replication))

    points = []
    for index, (assignment, params, regime) in enumerate(instances):
        point_records = [record for record in records if record.point == index]
        if regime is not None:
            q = regime.q
            eta = eta_factor(regime.regime, params.n, params.p, q, params.r)
            try:
                prediction = predict(regime, params.r, params.n, params.p)
            except (DomainError, IntegrationFailure) as e:
                logger.warning(f"No theory column at point {index}: {e}")
                prediction = None
        else:
            q = g_critical(params.n, params.p, params.r)
            prediction = None
            eta = eta_factor(Regime.Q_EQUALS_G, params.n, params.p, q)
        summaries = {}
        for statistic in plan.outputs:
            values = [
                _statistic_value(statistic, record, params, q, eta) for record in point_records
            ]
            summaries[statistic] = StatSummary.from_values(
                values, _theory_value(statistic, prediction, plan.kappa)
            )
        points.append(PointSummary(index, assignment, params, regime, q, summaries))
        logger.info(
            f"Point {index} {assignment or ''}: "
            + ", ".join(f"{s.value}={v.mean:.6g}" for s, v in summaries.items())
        )
    return AggregateResult(plan=plan, points=points)


def with_replications(plan: ExperimentPlan, replications: int) -> ExperimentPlan:
    """Copy of a plan with a different replication count."""
    return replace(plan, replications=replications)

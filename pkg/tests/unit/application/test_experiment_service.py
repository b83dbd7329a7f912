"""Unit tests for experiment plans, workers and aggregation."""

import math

import pytest

from src.application.experiment_service import (
    AggregateResult,
    ExperimentPlan,
    Simulator,
    StatSummary,
    Statistic,
    check_budget,
    parallel_map,
    point_instance,
    run_plan,
    with_replications,
)
from src.domain.models.errors import BudgetExceeded, ConfigError
from src.domain.models.params import ModelParams, Regime, RegimeSpec
from src.infrastructure.config import reset_settings


def _square(value):
    return value * value


@pytest.fixture
def base_params():
    """Small instance the chain simulator handles in milliseconds."""
    return ModelParams(n=300, p=0.02, r=2, a_r=12, a_b=6, seed=3)


@pytest.fixture
def regime():
    """q = g on the base instance, alpha_R = 2, alpha_B = 0.75."""
    return RegimeSpec.for_instance(Regime.Q_EQUALS_G, 2.0, 0.75, 300, 0.02, 2)


@pytest.mark.unit
class TestExperimentPlan:
    """Tests for ExperimentPlan validation and sweep expansion."""

    def test_replications_positive(self, base_params):
        """At least one replication is required."""
        with pytest.raises(ConfigError, match="replications"):
            ExperimentPlan(base=base_params, replications=0)

    def test_unknown_sweep_key(self, base_params):
        """Only instance and regime parameters can be swept."""
        with pytest.raises(ConfigError, match="cannot sweep"):
            ExperimentPlan(base=base_params, sweep=(("seed", (1.0, 2.0)),))

    def test_empty_sweep_values(self, base_params):
        """A sweep axis needs at least one value."""
        with pytest.raises(ConfigError, match="no values"):
            ExperimentPlan(base=base_params, sweep=(("n", ()),))

    def test_alpha_sweep_needs_regime(self, base_params):
        """alpha sweeps only make sense with a declared regime."""
        with pytest.raises(ConfigError, match="regime"):
            ExperimentPlan(base=base_params, sweep=(("alpha_R", (1.5, 2.0)),))

    def test_points_row_major(self, base_params):
        """Points are the Cartesian product, last axis fastest."""
        plan = ExperimentPlan(
            base=base_params, sweep=(("n", (200.0, 300.0)), ("a_R", (10.0, 11.0, 12.0)))
        )
        points = plan.points()
        assert plan.size == 6
        assert points[0] == {"n": 200.0, "a_R": 10.0}
        assert points[1] == {"n": 200.0, "a_R": 11.0}
        assert points[3] == {"n": 300.0, "a_R": 10.0}

    def test_no_sweep_single_point(self, base_params):
        """Without a sweep the plan has one empty assignment."""
        plan = ExperimentPlan(base=base_params)
        assert plan.size == 1
        assert plan.points() == [{}]

    def test_with_replications(self, base_params):
        """with_replications copies the plan with a new count."""
        plan = ExperimentPlan(base=base_params, replications=3)
        copy = with_replications(plan, 7)
        assert copy.replications == 7
        assert plan.replications == 3
        assert copy.base == plan.base


@pytest.mark.unit
class TestPointInstance:
    """Tests for point_instance."""

    def test_base_unchanged_without_assignment(self, base_params):
        """An empty assignment returns the base instance."""
        params, regime = point_instance(ExperimentPlan(base=base_params), {})
        assert params == base_params
        assert regime is None

    def test_alpha_assignment_rederives_seeds(self, base_params, regime):
        """Sweeping alpha_R re-derives floored seed counts from q."""
        plan = ExperimentPlan(base=base_params, regime=regime, sweep=(("alpha_R", (3.0,)),))
        params, point_regime = point_instance(plan, {"alpha_R": 3.0})
        assert point_regime.alpha_r == 3.0
        assert params.a_r == math.floor(3.0 * point_regime.q)
        assert params.a_b == math.floor(0.75 * point_regime.q)

    def test_explicit_seed_count_wins(self, base_params):
        """a_R in the assignment overrides the base."""
        plan = ExperimentPlan(base=base_params, sweep=(("a_R", (20.0,)),))
        params, _ = point_instance(plan, {"a_R": 20.0})
        assert (params.a_r, params.a_b) == (20, 6)


@pytest.mark.unit
class TestBudgetAndWorkers:
    """Tests for check_budget and parallel_map."""

    def test_budget_exceeded(self, base_params):
        """Plans larger than the budget are refused."""
        plan = ExperimentPlan(base=base_params, replications=2)
        with pytest.raises(BudgetExceeded, match="budget is 1"):
            check_budget(plan, budget=1)
        check_budget(plan, budget=2)

    def test_budget_from_environment(self, base_params, monkeypatch):
        """CB_BUDGET sets the default budget."""
        monkeypatch.setenv("CB_BUDGET", "3")
        reset_settings()
        with pytest.raises(BudgetExceeded):
            check_budget(ExperimentPlan(base=base_params, replications=4))

    def test_parallel_map_in_process_keeps_order(self):
        """One worker maps in order without a pool."""
        assert parallel_map(_square, [3, 1, 2], workers=1) == [9, 1, 4]

    def test_parallel_map_uses_pool(self, mocker):
        """Several workers and tasks go through a process pool."""
        pool_cls = mocker.patch("src.application.experiment_service.ProcessPoolExecutor")
        pool = pool_cls.return_value.__enter__.return_value
        pool.map.return_value = iter([9, 1, 4])
        assert parallel_map(_square, [3, 1, 2], workers=2) == [9, 1, 4]
        pool_cls.assert_called_once_with(max_workers=2)
        pool.map.assert_called_once_with(_square, [3, 1, 2], chunksize=1)


@pytest.mark.unit
class TestStatSummary:
    """Tests for StatSummary."""

    def test_empty(self):
        """No values give a NaN mean and no interval."""
        summary = StatSummary.from_values([])
        assert summary.count == 0
        assert math.isnan(summary.mean)
        assert summary.ci_lo is None

    def test_single_value(self):
        """One value has a mean but no spread."""
        summary = StatSummary.from_values([2.5])
        assert summary.mean == 2.5
        assert summary.std is None
        assert summary.ci_hi is None

    def test_symmetric_interval(self):
        """The Student-t interval is centred on the mean."""
        summary = StatSummary.from_values([1.0, 2.0, 3.0, 4.0])
        assert summary.mean == pytest.approx(2.5)
        assert summary.ci_lo < summary.mean < summary.ci_hi
        assert summary.mean - summary.ci_lo == pytest.approx(summary.ci_hi - summary.mean)

    def test_non_finite_dropped(self):
        """None and non-finite values are left out."""
        summary = StatSummary.from_values([1.0, None, math.inf, 3.0])
        assert summary.count == 2
        assert summary.mean == pytest.approx(2.0)

    def test_discrepancy(self):
        """Discrepancy is relative to the theory value."""
        assert StatSummary.from_values([1.1, 1.1], theory=1.0).discrepancy == pytest.approx(0.1)
        assert StatSummary.from_values([1.0], theory=0.0).discrepancy is None
        assert StatSummary.from_values([1.0]).discrepancy is None


@pytest.mark.unit
class TestRunPlan:
    """Tests for run_plan."""

    def test_deterministic(self, base_params):
        """The same plan gives the same aggregates, in-process."""
        plan = ExperimentPlan(base=base_params, replications=4)
        first = run_plan(plan, workers=1)
        second = run_plan(plan, workers=1)
        assert first.to_dict()["points"] == second.to_dict()["points"]
        assert first.stat(Statistic.AR_OVER_Q).count == 4

    def test_rows_and_provenance(self, base_params):
        """One CSV row per point and statistic, with provenance in JSON."""
        plan = ExperimentPlan(
            base=base_params, sweep=(("a_B", (4.0, 6.0)),), replications=2
        )
        result = run_plan(plan, workers=1)
        rows = list(result.rows())
        assert len(rows) == 2 * len(plan.outputs)
        assert all(len(row) == len(AggregateResult.CSV_HEADER) for row in rows)
        data = result.to_dict()
        assert data["provenance"]["master_seed"] == 3
        assert data["provenance"]["plan"]["replications"] == 2

    def test_theory_column_with_regime(self, regime):
        """A declared regime fills the black theory value."""
        a_r, a_b = regime.seed_counts()
        params = ModelParams(n=300, p=0.02, r=2, a_r=a_r, a_b=a_b, seed=11)
        plan = ExperimentPlan(
            base=params,
            regime=regime,
            replications=2,
            outputs=(Statistic.AB_OVER_Q, Statistic.AR_OVER_N),
        )
        result = run_plan(plan, workers=1)
        black = result.stat(Statistic.AB_OVER_Q)
        assert black.theory == pytest.approx(0.95271, abs=1e-4)
        assert result.stat(Statistic.AR_OVER_N).theory == 1.0

    def test_exact_simulator(self, base_params):
        """The exact simulator runs through the same pipeline."""
        plan = ExperimentPlan(base=base_params, replications=2, simulator=Simulator.EXACT)
        result = run_plan(plan, workers=1)
        summary = result.stat(Statistic.AR_OVER_N)
        assert summary.count == 2
        assert 0.0 < summary.mean <= 1.0

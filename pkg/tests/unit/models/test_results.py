"""Unit tests for run modes, trajectories and terminal results."""

import pytest

from src.domain.models.errors import HardInvariantViolation
from src.domain.models.params import ModelParams
from src.domain.models.results import (
    Checkpoint,
    FinalResult,
    ModeSpec,
    ProlongedTail,
    RunMode,
    StopKind,
    StopRule,
    Trajectory,
    TrajectoryRecord,
)


@pytest.fixture
def params():
    """Tiny instance with 3 red and 2 black seeds."""
    return ModelParams(n=50, p=0.1, r=2, a_r=3, a_b=2, seed=11)


@pytest.mark.unit
class TestStopRule:
    """Tests for StopRule."""

    def test_negative_value_rejected(self):
        """Stop thresholds are non-negative."""
        with pytest.raises(HardInvariantViolation):
            StopRule(StopKind.STEP, -1)

    @pytest.mark.parametrize(
        "kind,value,expected",
        [
            (StopKind.TIME, 2.0, True),
            (StopKind.TIME, 2.5, False),
            (StopKind.STEP, 7, True),
            (StopKind.STEP, 8, False),
            (StopKind.RED_COUNT, 4, True),
            (StopKind.RED_COUNT, 5, False),
        ],
    )
    def test_fired(self, kind, value, expected):
        """Each kind compares against its own counter."""
        assert StopRule(kind, value).fired(t=2.0, k=7, n_red=4) is expected

    def test_to_dict(self):
        """Serialized as kind and value."""
        assert StopRule(StopKind.RED_COUNT, 3).to_dict() == {"kind": "red_count", "value": 3}


@pytest.mark.unit
class TestModeSpec:
    """Tests for the ModeSpec factories."""

    def test_factories(self):
        """Only stopped mode carries a stop rule."""
        rule = StopRule(StopKind.TIME, 1.0)
        assert ModeSpec.standard().mode is RunMode.STANDARD
        assert ModeSpec.standard().stop_rule is None
        assert ModeSpec.stopped(rule).stop_rule == rule
        assert ModeSpec.prolonged().mode is RunMode.PROLONGED

    def test_stop_rule_only_for_stopped(self):
        """A stop rule outside stopped mode, or a stopped mode without one, is rejected."""
        with pytest.raises(HardInvariantViolation):
            ModeSpec(RunMode.STANDARD, StopRule(StopKind.STEP, 3))
        with pytest.raises(HardInvariantViolation):
            ModeSpec(RunMode.STOPPED)


@pytest.mark.unit
class TestTrajectory:
    """Tests for trajectory invariants."""

    def test_valid_path_passes(self):
        """Monotone counts that sum to k pass the check."""
        trajectory = Trajectory()
        trajectory.append(TrajectoryRecord(0, 0.0, 0, 0, 2, 1))
        trajectory.append(TrajectoryRecord(1, 0.4, 1, 0, 2, 1))
        trajectory.append(TrajectoryRecord(2, 0.9, 1, 1, 1, 0))
        trajectory.check()
        assert len(trajectory) == 3

    def test_count_mismatch(self):
        """N_R + N_B must equal k."""
        trajectory = Trajectory([TrajectoryRecord(1, 0.1, 1, 1, 0, 0)])
        with pytest.raises(HardInvariantViolation, match="N_R \\+ N_B"):
            trajectory.check()

    def test_time_must_not_decrease(self):
        """Physical time is non-decreasing."""
        trajectory = Trajectory(
            [TrajectoryRecord(0, 1.0, 0, 0, 1, 0), TrajectoryRecord(1, 0.5, 1, 0, 0, 0)]
        )
        with pytest.raises(HardInvariantViolation, match="time"):
            trajectory.check()

    def test_as_row_order(self):
        """Row order matches the CSV header."""
        assert TrajectoryRecord(3, 1.5, 2, 1, 4, 0).as_row() == (3, 1.5, 2, 1, 4, 0)


@pytest.mark.unit
class TestFinalResult:
    """Tests for FinalResult."""

    def test_counts_must_balance(self, params):
        """A_R* + A_B* = K* + a_R + a_B."""
        with pytest.raises(HardInvariantViolation):
            FinalResult(a_r_star=5, a_b_star=2, k_star=1, t_k_star=1.0, params=params)

    def test_counts_not_below_seeds(self, params):
        """Final counts include the seeds."""
        with pytest.raises(HardInvariantViolation):
            FinalResult(a_r_star=6, a_b_star=1, k_star=2, t_k_star=1.0, params=params)

    def test_checkpoint_lookup(self, params):
        """checkpoint(k) finds the snapshot at step k or returns None."""
        result = FinalResult(
            a_r_star=5,
            a_b_star=2,
            k_star=2,
            t_k_star=1.0,
            params=params,
            checkpoints=[Checkpoint(1, 0.5, 1, 0), Checkpoint(2, 1.0, 2, 0, 4, 0)],
        )
        assert result.checkpoint(2).susceptible_r == 4
        assert result.checkpoint(3) is None

    def test_to_dict_keys(self, params):
        """The JSON object carries the documented keys and the mode extras."""
        result = FinalResult(
            a_r_star=5,
            a_b_star=2,
            k_star=2,
            t_k_star=1.25,
            params=params,
            mode=ModeSpec.prolonged(),
            prolonged=ProlongedTail(40, 5, 9.0),
            metadata={"simulator": "chain"},
        )
        data = result.to_dict()
        assert data["a_r_star"] == 5
        assert data["k_star"] == 2
        assert data["seed"] == 11
        assert data["mode"] == "prolonged"
        assert data["prolonged"] == {"n_r": 40, "n_b": 5, "t": 9.0}
        assert data["metadata"]["simulator"] == "chain"
        assert "stop_rule" not in data

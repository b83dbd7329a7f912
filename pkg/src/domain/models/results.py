"""Run modes, recorded trajectories and terminal results of a simulation."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from src.domain.models.errors import HardInvariantViolation
from src.domain.models.params import ModelParams, NodeColor


class RunMode(Enum):
    """How a run treats the end of the original process."""

    STANDARD = "standard"
    STOPPED = "stopped"  # red activations frozen after a stop rule fires
    PROLONGED = "prolonged"  # all white nodes activate after K*


class StopKind(Enum):
    """What a stop rule is measured against."""

    TIME = "time"
    STEP = "step"
    RED_COUNT = "red_count"


@dataclass(frozen=True)
class StopRule:
    """Point at which red activation halts in a stopped run.

    Attributes:
        kind: Physical time, activation index, or number of red activations
        value: Threshold in the unit of ``kind``
    """

    kind: StopKind
    value: float

    def __post_init__(self):
        if self.value < 0:
            raise HardInvariantViolation(f"stop rule value must be >= 0, got {self.value}")

    def fired(self, t: float, k: int, n_red: int) -> bool:
        """Whether the rule has fired at time t after k activations."""
        if self.kind is StopKind.TIME:
            return t >= self.value
        if self.kind is StopKind.STEP:
            return k >= self.value
        return n_red >= self.value

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "value": self.value}


@dataclass(frozen=True)
class ModeSpec:
    """Tagged union of the three run modes.

    Attributes:
        mode: Standard, stopped or prolonged
        stop_rule: Required for STOPPED, forbidden otherwise
    """

    mode: RunMode = RunMode.STANDARD
    stop_rule: Optional[StopRule] = None

    def __post_init__(self):
        if (self.mode is RunMode.STOPPED) != (self.stop_rule is not None):
            raise HardInvariantViolation("a stop rule is required exactly for stopped runs")

    @classmethod
    def standard(cls) -> "ModeSpec":
        return cls(RunMode.STANDARD)

    @classmethod
    def stopped(cls, rule: StopRule) -> "ModeSpec":
        return cls(RunMode.STOPPED, rule)

    @classmethod
    def prolonged(cls) -> "ModeSpec":
        return cls(RunMode.PROLONGED)


@dataclass(frozen=True)
class ActivationEvent:
    """One step of the embedded chain.

    Attributes:
        k: Step index after the activation (1-based)
        node: Activated node id
        color: Color the node took
        wait: Sojourn time since the previous activation
        t: Physical time of the activation
    """

    k: int
    node: int
    color: NodeColor
    wait: float
    t: float


@dataclass(frozen=True)
class TrajectoryRecord:
    """Sample of the path at step k (columns of the trajectory CSV)."""

    k: int
    t: float
    n_r: int
    n_b: int
    enabled_r: int
    enabled_b: int

    def as_row(self) -> Tuple[int, float, int, int, int, int]:
        return (self.k, self.t, self.n_r, self.n_b, self.enabled_r, self.enabled_b)


@dataclass
class Trajectory:
    """Recorded path samples, every ``stride`` steps plus the terminal step.

    Attributes:
        records: Samples in increasing k
        stride: Recording interval in steps (1 means every step)
    """

    records: List[TrajectoryRecord] = field(default_factory=list)
    stride: int = 1

    def append(self, record: TrajectoryRecord) -> None:
        self.records.append(record)

    def check(self) -> None:
        """Verify the monotonicity and counting invariants of the path.

        Raises:
            HardInvariantViolation: On the first violated invariant
        """
        previous: Optional[TrajectoryRecord] = None
        for record in self.records:
            if record.n_r + record.n_b != record.k:
                raise HardInvariantViolation(f"N_R + N_B != k at k={record.k}")
            if previous is not None:
                if record.k <= previous.k:
                    raise HardInvariantViolation(f"k not increasing at k={record.k}")
                if record.t < previous.t:
                    raise HardInvariantViolation(f"time decreased at k={record.k}")
                if record.n_r < previous.n_r or record.n_b < previous.n_b:
                    raise HardInvariantViolation(f"counts decreased at k={record.k}")
            previous = record

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class Checkpoint:
    """Snapshot taken right after step k.

    Attributes:
        k: Step index
        t: Physical time
        n_r: Red activations so far (non-seed)
        n_b: Black activations so far (non-seed)
        susceptible_r: |S_R[k]| over all non-seed nodes, None without tracking
        susceptible_b: |S_B[k]| over all non-seed nodes, None without tracking
    """

    k: int
    t: float
    n_r: int
    n_b: int
    susceptible_r: Optional[int] = None
    susceptible_b: Optional[int] = None


@dataclass(frozen=True)
class ProlongedTail:
    """Where a prolonged run ended (all non-seed nodes active, or max_steps)."""

    n_r: int
    n_b: int
    t: float


@dataclass
class FinalResult:
    """Terminal state of the original process, plus optional extras.

    Attributes:
        a_r_star: Final number of red nodes, seeds included
        a_b_star: Final number of black nodes, seeds included
        k_star: Number of non-seed activations before termination
        t_k_star: Physical time of the last activation (0 when k_star is 0)
        params: Instance that produced the run
        mode: Run mode and stop rule
        trajectory: Recorded path, when requested
        checkpoints: Snapshots at requested step indices
        prolonged: End of the prolonged path (PROLONGED mode only)
        metadata: Free-form run facts (simulator, seed rounding, flags)

    Raises:
        HardInvariantViolation: If the counts are inconsistent
    """

    a_r_star: int
    a_b_star: int
    k_star: int
    t_k_star: float
    params: ModelParams
    mode: ModeSpec = field(default_factory=ModeSpec.standard)
    trajectory: Optional[Trajectory] = None
    checkpoints: List[Checkpoint] = field(default_factory=list)
    prolonged: Optional[ProlongedTail] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        p = self.params
        if self.a_r_star + self.a_b_star != self.k_star + p.a_r + p.a_b:
            raise HardInvariantViolation("A_R* + A_B* != K* + a_R + a_B")
        if self.a_r_star < p.a_r or self.a_b_star < p.a_b:
            raise HardInvariantViolation("final counts below seed counts")
        if self.a_r_star + self.a_b_star > p.n:
            raise HardInvariantViolation("more active nodes than nodes")

    def checkpoint(self, k: int) -> Optional[Checkpoint]:
        """The snapshot taken at step k, if one was recorded."""
        for snapshot in self.checkpoints:
            if snapshot.k == k:
                return snapshot
        return None

    def to_dict(self) -> Dict[str, Any]:
        """JSON object with the documented keys, plus mode and stop rule."""
        data: Dict[str, Any] = {
            "a_r_star": self.a_r_star,
            "a_b_star": self.a_b_star,
            "k_star": self.k_star,
            "t_k_star": self.t_k_star,
            "params": self.params.to_dict(),
            "seed": self.params.seed,
            "mode": self.mode.mode.value,
        }
        if self.mode.stop_rule is not None:
            data["stop_rule"] = self.mode.stop_rule.to_dict()
        if self.prolonged is not None:
            data["prolonged"] = {
                "n_r": self.prolonged.n_r,
                "n_b": self.prolonged.n_b,
                "t": self.prolonged.t,
            }
        if self.metadata:
            data["metadata"] = dict(self.metadata)
        return data

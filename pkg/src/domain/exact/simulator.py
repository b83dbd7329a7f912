"""Continuous-time reference simulator on an explicit G(n, p).

Every white node owns a unit-rate Poisson clock; at each clock point it
compares its red and black neighbor counts and takes color S when
D_S - D_S̄ >= r. Only nodes that are currently suprathreshold can change
state at a clock point, so only they hold a pending wake time. A node enabled
at time t wakes at its first clock point after t. By memorylessness this has
the same law as waking every white node, and the run ends as soon as nothing
is enabled.
"""

import heapq
import logging
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from src.domain.core.seeding import make_coupled_seeds, make_seeds
from src.domain.core.validation import validate
from src.domain.exact.clocks import ClockBank
from src.domain.exact.graph import ExplicitGraph, generate_graph
from src.domain.marks.ledger import BLACK, RED, WHITE, MarkLedger
from src.domain.marks.sampling import UniformBuffer, binomial_recipients
from src.domain.models.errors import HardInvariantViolation, MissingTrajectory
from src.domain.models.params import ModelParams, NodeColor
from src.domain.models.results import (
    Checkpoint,
    FinalResult,
    ModeSpec,
    ProlongedTail,
    RunMode,
    StopKind,
    Trajectory,
    TrajectoryRecord,
)
from src.infrastructure.config import get_settings
from src.infrastructure.rng import CLOCKS, COLORS, GRAPH, REUNVEIL, SEEDS, RngStream

logger = logging.getLogger(__name__)


class ExactSimulator:
    """One run of the process on a materialized graph.

    Design decisions:
    - Ties between wake times are broken by node id (heap order on (t, v))
    - Heap entries are invalidated lazily through ``_wake``
    - Before K*, marks come from graph edges only. With active-node
      tracking, marks to already-active nodes and the activating node itself
      are fresh Bernoulli(p) draws, matching the marks construction the
      prolonged process is defined on
    """

    def __init__(
        self,
        params: ModelParams,
        rng: RngStream,
        mode: Optional[ModeSpec] = None,
        graph: Optional[ExplicitGraph] = None,
        seeds: Optional[Tuple[Iterable[int], Iterable[int]]] = None,
        clocks: Optional[ClockBank] = None,
        track_active: Optional[bool] = None,
        record_trajectory: bool = False,
        trajectory_stride: int = 1,
        checkpoints: Sequence[int] = (),
        max_steps: Optional[int] = None,
        audit: Optional[bool] = None,
    ):
        validate(params)
        self.params = params
        self.mode = mode or ModeSpec.standard()
        self.graph = graph if graph is not None else generate_graph(params, rng.child(GRAPH))
        if self.graph.n != params.n:
            raise HardInvariantViolation(f"graph has {self.graph.n} nodes, params say {params.n}")

        red, black = seeds if seeds is not None else make_seeds(params, rng.child(SEEDS))
        self.red_seeds: FrozenSet[int] = frozenset(red)
        self.black_seeds: FrozenSet[int] = frozenset(black)
        if (len(self.red_seeds), len(self.black_seeds)) != (params.a_r, params.a_b):
            raise HardInvariantViolation("seed sets do not match a_R, a_B")

        prolonged = self.mode.mode is RunMode.PROLONGED
        if track_active is None:
            track_active = prolonged
        if prolonged and not track_active:
            raise HardInvariantViolation("prolonged runs need active-node tracking")

        self.clocks = clocks if clocks is not None else ClockBank(params.n, rng.child(CLOCKS))
        self._colors = UniformBuffer(rng.child(COLORS).generator)
        self._reunveil = UniformBuffer(rng.child(REUNVEIL).generator)
        self.ledger = MarkLedger(
            params.n, params.r, self.red_seeds, self.black_seeds, track_active
        )
        self._audit = get_settings().audit if audit is None else audit

        self.trajectory = Trajectory(stride=trajectory_stride) if record_trajectory else None
        self._checkpoint_steps = set(checkpoints)
        self.checkpoints: List[Checkpoint] = []
        self.max_steps = max_steps

        self._heap: List[Tuple[float, int]] = []
        self._wake: List[Optional[float]] = [None] * params.n
        self._stopped = False
        self._unconditional = False  # prolonged phase: every white node enabled
        self.t = 0.0
        self._t_last = 0.0

        self._seed_marks()

    # ------------------------------------------------------------------
    # Setup
    # ------------------------------------------------------------------

    def _seed_marks(self) -> None:
        n = self.params.n
        d_r = [0] * n
        d_b = [0] * n
        for counters, seeds in ((d_r, self.red_seeds), (d_b, self.black_seeds)):
            for s in seeds:
                for w in self.graph.adjacency[s]:
                    counters[w] += 1
        self.ledger.set_marks(d_r, d_b)

    # ------------------------------------------------------------------
    # Scheduling
    # ------------------------------------------------------------------

    def _is_enabled(self, v: int) -> bool:
        ledger = self.ledger
        if ledger.colors[v] != WHITE or ledger.is_seed[v]:
            return False
        if self._unconditional:
            return True
        if v in ledger.enabled_b:
            return True
        return v in ledger.enabled_r and not self._stopped

    def _sync(self, v: int) -> None:
        enabled = self._is_enabled(v)
        if enabled and self._wake[v] is None:
            wake = self.clocks.next_after(v, self.t)
            self._wake[v] = wake
            heapq.heappush(self._heap, (wake, v))
        elif not enabled and self._wake[v] is not None:
            self._wake[v] = None

    def _enabled_count(self) -> int:
        ledger = self.ledger
        if self._unconditional:
            return len(ledger.white)
        return len(ledger.enabled_b) + (0 if self._stopped else len(ledger.enabled_r))

    def _peek(self) -> Optional[Tuple[float, int]]:
        heap = self._heap
        while heap:
            wake, v = heap[0]
            if self._wake[v] == wake:
                return wake, v
            heapq.heappop(heap)
        return None

    def _fire_stop(self) -> None:
        self._stopped = True
        for v in list(self.ledger.enabled_r):
            self._sync(v)
        logger.debug(f"Stop rule fired at t={self.t:.6g}, k={self.ledger.k}")

    def _check_count_stop(self) -> None:
        rule = self.mode.stop_rule
        if rule is None or self._stopped or rule.kind is StopKind.TIME:
            return
        if rule.fired(self.t, self.ledger.k, self.ledger.n_r):
            self._fire_stop()

    # ------------------------------------------------------------------
    # Recording
    # ------------------------------------------------------------------

    def _record(self, force: bool = False) -> None:
        ledger = self.ledger
        k = ledger.k
        if self.trajectory is not None and (force or k % self.trajectory.stride == 0):
            records = self.trajectory.records
            if not records or records[-1].k != k:
                self.trajectory.append(
                    TrajectoryRecord(
                        k=k,
                        t=self.t,
                        n_r=ledger.n_r,
                        n_b=ledger.n_b,
                        enabled_r=len(ledger.enabled_r),
                        enabled_b=len(ledger.enabled_b),
                    )
                )
        if k in self._checkpoint_steps and all(c.k != k for c in self.checkpoints):
            s_r, s_b = (
                ledger.susceptible_counts() if ledger.track_active else (None, None)
            )
            self.checkpoints.append(Checkpoint(k, self.t, ledger.n_r, ledger.n_b, s_r, s_b))

    # ------------------------------------------------------------------
    # Dynamics
    # ------------------------------------------------------------------

    def _activate(self, v: int, color: int) -> None:
        ledger = self.ledger
        ledger.activate(v, color)
        self._wake[v] = None
        self._t_last = self.t
        touched = []
        for w in self.graph.adjacency[v]:
            if ledger.colors[w] == WHITE and not ledger.is_seed[w]:
                ledger.add_mark(w, color)
                touched.append(w)
        if ledger.track_active:
            active = ledger.active.items
            for i in binomial_recipients(self._reunveil, len(active), self.params.p):
                ledger.add_mark(active[i], color)
        for w in touched:
            self._sync(w)

    def _step_limit_reached(self) -> bool:
        return self.max_steps is not None and self.ledger.k >= self.max_steps

    def _run_original(self) -> None:
        rule = self.mode.stop_rule
        self._check_count_stop()
        if rule is not None and rule.kind is StopKind.TIME and rule.value <= 0:
            self._fire_stop()
        for v in list(self.ledger.white):
            self._sync(v)

        while self._enabled_count() > 0 and not self._step_limit_reached():
            top = self._peek()
            if top is None:
                break
            wake, v = top
            if (
                rule is not None
                and rule.kind is StopKind.TIME
                and not self._stopped
                and wake > rule.value
            ):
                self.t = rule.value
                self._fire_stop()
                continue
            heapq.heappop(self._heap)
            self.t = wake
            color = self.ledger.supra_color(v)
            self._activate(v, color)
            self._check_count_stop()
            self._record()
            if self._audit:
                self.ledger.audit(before_termination=True)

    def _run_prolonged(self) -> None:
        ledger = self.ledger
        self._unconditional = True
        for v in list(ledger.white):
            self._sync(v)
        first = True
        while len(ledger.white) > 0 and not self._step_limit_reached():
            top = self._peek()
            if top is None:
                break
            wake, v = top
            heapq.heappop(self._heap)
            self.t = wake
            u_red = 0.5 if first else ledger.red_probability()
            first = False
            color = RED if self._colors() < u_red else BLACK
            self._activate(v, color)
            ledger.check_q_bounds()
            self._record()
            if self._audit:
                ledger.audit(before_termination=False)

    def run(self) -> FinalResult:
        """Run to termination (or max_steps) and return the terminal result."""
        params = self.params
        ledger = self.ledger
        logger.debug(
            f"Exact run n={params.n} p={params.p} r={params.r} "
            f"a_R={params.a_r} a_B={params.a_b} mode={self.mode.mode.value}"
        )
        self._record(force=True)
        self._run_original()

        k_star = ledger.k
        truncated = self._step_limit_reached() and self._enabled_count() > 0
        t_k_star = self._t_last
        a_r_star = params.a_r + ledger.n_r
        a_b_star = params.a_b + ledger.n_b
        self.t = t_k_star
        self._record(force=True)

        prolonged = None
        if self.mode.mode is RunMode.PROLONGED and not truncated:
            self._run_prolonged()
            prolonged = ProlongedTail(ledger.n_r, ledger.n_b, self._t_last)
            self._record(force=True)

        return FinalResult(
            a_r_star=a_r_star,
            a_b_star=a_b_star,
            k_star=k_star,
            t_k_star=t_k_star,
            params=params,
            mode=self.mode,
            trajectory=self.trajectory,
            checkpoints=sorted(self.checkpoints, key=lambda c: c.k),
            prolonged=prolonged,
            metadata={
                "simulator": "exact",
                "edges": self.graph.edge_count,
                "track_active": ledger.track_active,
                "truncated": truncated,
            },
        )


def run_exact(
    params: ModelParams,
    rng: Optional[RngStream] = None,
    mode: Optional[ModeSpec] = None,
    *,
    graph: Optional[ExplicitGraph] = None,
    seeds: Optional[Tuple[Iterable[int], Iterable[int]]] = None,
    clocks: Optional[ClockBank] = None,
    track_active: Optional[bool] = None,
    trajectory: bool = False,
    trajectory_stride: int = 1,
    checkpoints: Sequence[int] = (),
    max_steps: Optional[int] = None,
    audit: Optional[bool] = None,
) -> FinalResult:
    """Simulate one instance on an explicit graph.

    Args:
        params: Instance; ``params.seed`` is the master seed when rng is None
        rng: Stream to draw from (defaults to RngStream(params.seed))
        mode: Standard, stopped or prolonged (default standard)
        graph: Fixed graph instead of a fresh G(n, p)
        seeds: Fixed (red, black) seed sets instead of uniform placement
        clocks: Shared clock bank (couplings)
        track_active: Maintain |S_S| over active nodes (default: prolonged only)
        trajectory: Record the path
        trajectory_stride: Recording interval in steps
        checkpoints: Steps at which to take snapshots
        max_steps: Stop after this many activations
        audit: Rescan the ledger after every step (default from settings)

    Returns:
        FinalResult of the original process

    Raises:
        HardInvariantViolation: On invalid parameters or seeds
        CapExceeded: If n exceeds the exact-simulator cap
    """
    rng = rng if rng is not None else RngStream(params.seed)
    simulator = ExactSimulator(
        params,
        rng,
        mode=mode,
        graph=graph,
        seeds=seeds,
        clocks=clocks,
        track_active=track_active,
        record_trajectory=trajectory,
        trajectory_stride=trajectory_stride,
        checkpoints=checkpoints,
        max_steps=max_steps,
        audit=audit,
    )
    return simulator.run()


def embedded_chain(result: FinalResult) -> List[Tuple[NodeColor, float]]:
    """Colors and sojourn times of steps 1..K* read off a full trajectory.

    Raises:
        MissingTrajectory: Unless the run recorded every step
    """
    trajectory = result.trajectory
    if trajectory is None or trajectory.stride != 1:
        raise MissingTrajectory("embedded_chain needs a trajectory recorded with stride 1")
    chain = []
    previous = trajectory.records[0]
    for record in trajectory.records[1:]:
        if record.k > result.k_star:
            break
        color = NodeColor.RED if record.n_r > previous.n_r else NodeColor.BLACK
        chain.append((color, record.t - previous.t))
        previous = record
    if len(chain) != result.k_star:
        raise MissingTrajectory(f"trajectory has {len(chain)} steps, K* = {result.k_star}")
    return chain


def run_coupled_pair(
    first: ModelParams,
    second: ModelParams,
    rng: RngStream,
    first_mode: Optional[ModeSpec] = None,
    second_mode: Optional[ModeSpec] = None,
    graph: Optional[ExplicitGraph] = None,
) -> Tuple[FinalResult, FinalResult]:
    """Run two instances on one graph, one clock bank and nested seeds.

    The instances may differ in seed counts and mode only. Seeds come from
    one permutation (red prefix, black suffix), so adding red seeds or
    removing black seeds can only increase the final red count pathwise.

    Raises:
        HardInvariantViolation: If n, p or r differ
    """
    if (first.n, first.p, first.r) != (second.n, second.p, second.r):
        raise HardInvariantViolation("coupled instances must share n, p and r")
    graph = graph if graph is not None else generate_graph(first, rng.child(GRAPH))
    clocks = ClockBank(first.n, rng.child(CLOCKS))
    seeds_first, seeds_second = make_coupled_seeds(
        first.n, (first.a_r, first.a_b), (second.a_r, second.a_b), rng.child(SEEDS)
    )
    results = []
    for params, seeds, mode, label in (
        (first, seeds_first, first_mode, 0),
        (second, seeds_second, second_mode, 1),
    ):
        results.append(
            run_exact(
                params,
                rng.child(COLORS, label),
                mode,
                graph=graph,
                seeds=seeds,
                clocks=clocks,
            )
        )
    return results[0], results[1]

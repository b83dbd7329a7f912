"""Embedded-chain simulator that never materializes the graph.

Edges are unveiled lazily: when a node activates with color S, each node of
the mark pool independently gains an S-mark with probability p. Only the
non-seed nodes are represented (ids 0..n_W-1); the seeds enter through the
initial counters D_S(v) ~ Bin(a_S, p).

The next activation is a uniform pick among the enabled white nodes, which
is the same as picking color R with probability |W∩S_R| / |W∩(S_R∪S_B)| and
then a uniform node of that color. Sojourn times are Exp(number enabled).
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

from src.domain.core.validation import validate
from src.domain.marks.ledger import BLACK, RED, MarkLedger
from src.domain.marks.sampling import ExponentialBuffer, UniformBuffer, binomial_recipients
from src.domain.models.params import ModelParams, NodeColor, RegimeSpec
from src.domain.models.results import (
    ActivationEvent,
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
from src.infrastructure.rng import (
    COLORS,
    INITIAL_MARKS,
    MARK_COUNTS,
    RECIPIENTS,
    SELECTION,
    SOJOURN,
    RngStream,
)

logger = logging.getLogger(__name__)

# Number of trajectory samples aimed for over q steps when a regime is given.
SAMPLES_PER_TIMESCALE = 100


class ChainSimulator:
    """Step-by-step driver of one chain run.

    ``step()`` advances the current phase by one activation and returns None
    when that phase is over. A prolonged run has two phases: the original
    process up to K*, then ``start_prolonged()`` and the prolonged path
    until no white node is left.

    Design decisions:
    - Without full tracking the mark pool is the white set (the activating
      node removed first), so active nodes never receive marks
    - With full tracking the pool is all of V_W, which keeps |S_S| over
      every non-seed node exactly binomial
    - The exact Q^S corrections are always maintained under tracking;
      ``exact_q=False`` only drops them from the color draw
    """

    def __init__(
        self,
        params: ModelParams,
        rng: RngStream,
        mode: Optional[ModeSpec] = None,
        regime: Optional[RegimeSpec] = None,
        full_tracking: Optional[bool] = None,
        exact_q: bool = True,
        record_trajectory: bool = False,
        stride: Optional[int] = None,
        checkpoints: Sequence[int] = (),
        max_steps: Optional[int] = None,
        audit: Optional[bool] = None,
    ):
        validate(params)
        self.params = params
        self.mode = mode or ModeSpec.standard()
        self.regime = regime
        if full_tracking is None:
            full_tracking = self.mode.mode is RunMode.PROLONGED
        self.full_tracking = full_tracking
        self.exact_q = exact_q
        self._audit = get_settings().audit if audit is None else audit

        self._select = UniformBuffer(rng.child(SELECTION).generator)
        self._sojourn = ExponentialBuffer(rng.child(SOJOURN).generator)
        self._recipients = UniformBuffer(rng.child(RECIPIENTS).generator)
        self._counts = rng.child(MARK_COUNTS).generator
        self._colors = UniformBuffer(rng.child(COLORS).generator)

        n_w = params.n_white
        self.ledger = MarkLedger(n_w, params.r, track_active=full_tracking)
        initial = rng.child(INITIAL_MARKS).generator
        self.ledger.set_marks(
            initial.binomial(params.a_r, params.p, size=n_w).tolist(),
            initial.binomial(params.a_b, params.p, size=n_w).tolist(),
        )

        if stride is None:
            stride = math.ceil(regime.q / SAMPLES_PER_TIMESCALE) if regime is not None else 1
        self.trajectory = Trajectory(stride=max(1, stride)) if record_trajectory else None
        self._checkpoint_steps = set(checkpoints)
        self.checkpoints: List[Checkpoint] = []
        self.max_steps = max_steps

        self.t = 0.0
        self._stopped = False
        self._unconditional = False
        self._first_prolonged = False
        self._check_count_stop()
        rule = self.mode.stop_rule
        if rule is not None and rule.kind is StopKind.TIME and rule.value <= 0:
            self._fire_stop()

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    @property
    def k(self) -> int:
        return self.ledger.k

    def enabled_count(self) -> int:
        """Number of nodes that may activate next in the current phase."""
        ledger = self.ledger
        if self._unconditional:
            return len(ledger.white)
        return len(ledger.enabled_b) + (0 if self._stopped else len(ledger.enabled_r))

    def red_share(self) -> float:
        """U^R for the next step of the original process (0/0 read as 1/2)."""
        ledger = self.ledger
        red = 0 if self._stopped else len(ledger.enabled_r)
        total = red + len(ledger.enabled_b)
        return 0.5 if total == 0 else red / total

    def susceptible_counts(self) -> Tuple[int, int]:
        """(|S_R[k]|, |S_B[k]|) over all non-seed nodes, active ones included.

        Raises:
            TrackingDisabled: Without full tracking
        """
        return self.ledger.susceptible_counts()

    # ------------------------------------------------------------------
    # Stop rules
    # ------------------------------------------------------------------

    def _fire_stop(self) -> None:
        self._stopped = True
        logger.debug(f"Stop rule fired at t={self.t:.6g}, k={self.k}")

    def _check_count_stop(self) -> None:
        rule = self.mode.stop_rule
        if rule is None or self._stopped or rule.kind is StopKind.TIME:
            return
        if rule.fired(self.t, self.k, self.ledger.n_r):
            self._fire_stop()

    # ------------------------------------------------------------------
    # Dynamics
    # ------------------------------------------------------------------

    def _pick(self) -> Tuple[int, int]:
        ledger = self.ledger
        if self._unconditional:
            white = ledger.white.items
            node = white[self._select.index(len(white))]
            if self._first_prolonged:
                u_red = 0.5
                self._first_prolonged = False
            else:
                u_red = ledger.red_probability(self.exact_q)
            return node, RED if self._colors() < u_red else BLACK
        n_red = 0 if self._stopped else len(ledger.enabled_r)
        i = self._select.index(n_red + len(ledger.enabled_b))
        if i < n_red:
            return ledger.enabled_r.items[i], RED
        return ledger.enabled_b.items[i - n_red], BLACK

    def _propagate(self, color: int) -> None:
        ledger = self.ledger
        p = self.params.p
        if self.full_tracking:
            for v in binomial_recipients(self._recipients, ledger.n, p, self._counts):
                ledger.add_mark(v, color)
        else:
            white = ledger.white.items
            for i in binomial_recipients(self._recipients, len(white), p, self._counts):
                ledger.add_mark(white[i], color)

    def step(self) -> Optional[ActivationEvent]:
        """Advance one activation; None once the current phase has ended."""
        if self.max_steps is not None and self.k >= self.max_steps:
            return None
        rule = self.mode.stop_rule
        while True:
            m = self.enabled_count()
            if m == 0:
                return None
            wait = self._sojourn() / m
            if (
                rule is not None
                and rule.kind is StopKind.TIME
                and not self._stopped
                and self.t + wait > rule.value
            ):
                self.t = rule.value
                self._fire_stop()
                continue
            break

        previous = self.t
        self.t += wait
        node, color = self._pick()
        ledger = self.ledger
        ledger.activate(node, color)
        self._propagate(color)
        if self.full_tracking:
            ledger.check_q_bounds()
        self._check_count_stop()
        self._record()
        if self._audit:
            ledger.audit(before_termination=not self._unconditional)
        return ActivationEvent(
            k=self.k, node=node, color=NodeColor(color), wait=self.t - previous, t=self.t
        )

    def start_prolonged(self) -> None:
        """Enable every white node; colors now follow |Q^R| / (|Q^R| + |Q^B|)."""
        self._unconditional = True
        self._first_prolonged = True

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
            s_r, s_b = ledger.susceptible_counts() if ledger.track_active else (None, None)
            self.checkpoints.append(Checkpoint(k, self.t, ledger.n_r, ledger.n_b, s_r, s_b))

    def run(self) -> FinalResult:
        """Run the original process (and the prolonged path, if requested)."""
        params = self.params
        ledger = self.ledger
        logger.debug(
            f"Chain run n={params.n} p={params.p} r={params.r} "
            f"a_R={params.a_r} a_B={params.a_b} mode={self.mode.mode.value}"
        )
        self._record(force=True)
        t_last = 0.0
        while (event := self.step()) is not None:
            t_last = event.t

        k_star = ledger.k
        truncated = self.enabled_count() > 0
        a_r_star = params.a_r + ledger.n_r
        a_b_star = params.a_b + ledger.n_b
        self._record(force=True)

        prolonged = None
        if self.mode.mode is RunMode.PROLONGED and not truncated:
            self.t = t_last
            self.start_prolonged()
            t_end = t_last
            while (event := self.step()) is not None:
                t_end = event.t
            prolonged = ProlongedTail(ledger.n_r, ledger.n_b, t_end)
            self._record(force=True)

        metadata = {
            "simulator": "chain",
            "full_tracking": self.full_tracking,
            "truncated": truncated,
        }
        if self.trajectory is not None:
            metadata["stride"] = self.trajectory.stride
        if not self.exact_q and self.mode.mode is RunMode.PROLONGED:
            metadata["approximate_q"] = True
        return FinalResult(
            a_r_star=a_r_star,
            a_b_star=a_b_star,
            k_star=k_star,
            t_k_star=t_last,
            params=params,
            mode=self.mode,
            trajectory=self.trajectory,
            checkpoints=sorted(self.checkpoints, key=lambda c: c.k),
            prolonged=prolonged,
            metadata=metadata,
        )


def run_chain(
    params: ModelParams,
    rng: Optional[RngStream] = None,
    mode: Optional[ModeSpec] = None,
    regime: Optional[RegimeSpec] = None,
    *,
    full_tracking: Optional[bool] = None,
    exact_q: bool = True,
    trajectory: bool = False,
    stride: Optional[int] = None,
    checkpoints: Sequence[int] = (),
    max_steps: Optional[int] = None,
    audit: Optional[bool] = None,
) -> FinalResult:
    """Simulate one instance with the embedded chain.

    Args:
        params: Instance; ``params.seed`` is the master seed when rng is None
        rng: Stream to draw from (defaults to RngStream(params.seed))
        mode: Standard, stopped or prolonged (default standard)
        regime: Declared regime; sets the trajectory stride to ceil(q / 100)
        full_tracking: Mark all of V_W (default: prolonged only)
        exact_q: Use the exact Q^S bookkeeping for prolonged colors
        trajectory: Record the path
        stride: Explicit recording interval (overrides the regime default)
        checkpoints: Steps at which to take snapshots
        max_steps: Stop after this many activations
        audit: Rescan the ledger after every step (default from settings)

    Returns:
        FinalResult of the original process

    Raises:
        HardInvariantViolation: On invalid parameters
    """
    rng = rng if rng is not None else RngStream(params.seed)
    simulator = ChainSimulator(
        params,
        rng,
        mode=mode,
        regime=regime,
        full_tracking=full_tracking,
        exact_q=exact_q,
        record_trajectory=trajectory,
        stride=stride,
        checkpoints=checkpoints,
        max_steps=max_steps,
        audit=audit,
    )
    return simulator.run()

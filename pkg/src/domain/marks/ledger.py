"""Per-node mark counters and the suprathreshold sets derived from them.

Both simulators drive the same ledger: the exact simulator feeds it marks
read off an explicit graph, the chain simulator feeds it binomially sampled
recipients. The ledger keeps W∩S_R and W∩S_B as swap-remove index sets so
membership toggles and uniform picks are O(1).

With ``track_active`` the ledger also follows the non-seed nodes that are
already active, which is what the prolonged process needs: |S_R|, |S_B| over
all non-seed nodes and the two correction counts of

    Q^S = |S_S| - N_S + c3_S - c4_S

where c3_S counts S-active nodes outside S_S with D_S >= r and c4_S counts
nodes of the other color inside S_S whose own-color counter is >= r.
"""

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

from src.domain.models.errors import LedgerInconsistency, TrackingDisabled
from src.domain.models.params import NodeColor

logger = logging.getLogger(__name__)

WHITE = int(NodeColor.WHITE)
RED = int(NodeColor.RED)
BLACK = int(NodeColor.BLACK)


class IndexedSet:
    """Set of node ids in 0..capacity-1 with O(1) add, discard and pick.

    Items live in a dense list; ``_pos`` maps a node to its slot (-1 when
    absent). Removal swaps the last item into the freed slot.
    """

    __slots__ = ("items", "_pos")

    def __init__(self, capacity: int, members: Iterable[int] = ()):
        self.items: List[int] = []
        self._pos: List[int] = [-1] * capacity
        for v in members:
            self.add(v)

    def add(self, v: int) -> None:
        if self._pos[v] < 0:
            self._pos[v] = len(self.items)
            self.items.append(v)

    def discard(self, v: int) -> None:
        i = self._pos[v]
        if i < 0:
            return
        last = self.items.pop()
        if last != v:
            self.items[i] = last
            self._pos[last] = i
        self._pos[v] = -1

    def __contains__(self, v: int) -> bool:
        return self._pos[v] >= 0

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


class MarkLedger:
    """Mutable mark state of one run.

    Attributes:
        n: Number of node ids the ledger covers
        r: Activation threshold
        colors: Current color of every node (seeds included)
        d_r: Red-mark counter per node
        d_b: Black-mark counter per node
        white: Non-seed nodes that are still white
        enabled_r: White nodes with d_R - d_B >= r
        enabled_b: White nodes with d_B - d_R >= r
        active: Non-seed nodes that have activated
        n_r: Non-seed red activations so far
        n_b: Non-seed black activations so far
        track_active: Whether |S_S| and the Q corrections are maintained
    """

    def __init__(
        self,
        n: int,
        r: int,
        red_seeds: Iterable[int] = (),
        black_seeds: Iterable[int] = (),
        track_active: bool = False,
    ):
        self.n = n
        self.r = r
        self.track_active = track_active
        self.colors: List[int] = [WHITE] * n
        self.is_seed = bytearray(n)
        for v in red_seeds:
            self.colors[v] = RED
            self.is_seed[v] = 1
        for v in black_seeds:
            if self.is_seed[v]:
                raise LedgerInconsistency(f"node {v} is both a red and a black seed")
            self.colors[v] = BLACK
            self.is_seed[v] = 1
        self.d_r: List[int] = [0] * n
        self.d_b: List[int] = [0] * n
        self.white = IndexedSet(n, (v for v in range(n) if not self.is_seed[v]))
        self.enabled_r = IndexedSet(n)
        self.enabled_b = IndexedSet(n)
        self.active = IndexedSet(n)
        self.n_r = 0
        self.n_b = 0
        self._reset_counters()
        self.rebuild()

    @property
    def n_white_total(self) -> int:
        """Number of non-seed nodes, white or active."""
        return len(self.white) + len(self.active)

    @property
    def k(self) -> int:
        """Number of non-seed activations so far."""
        return self.n_r + self.n_b

    def _reset_counters(self) -> None:
        self.supra_r = 0
        self.supra_b = 0
        self.c3_r = 0
        self.c3_b = 0
        self.c4_r = 0
        self.c4_b = 0

    # ------------------------------------------------------------------
    # Bulk setup
    # ------------------------------------------------------------------

    def set_marks(self, d_r: Sequence[int], d_b: Sequence[int]) -> None:
        """Overwrite all counters (seeds ignored) and rebuild derived state."""
        for v in range(self.n):
            if not self.is_seed[v]:
                self.d_r[v] = int(d_r[v])
                self.d_b[v] = int(d_b[v])
        self.rebuild()

    def rebuild(self) -> None:
        """Recompute enabled sets and tracked counters from the counters."""
        self.enabled_r = IndexedSet(self.n)
        self.enabled_b = IndexedSet(self.n)
        for v in self.white:
            self._sync_enabled(v)
        self._reset_counters()
        if self.track_active:
            for v in range(self.n):
                if not self.is_seed[v]:
                    self._tally(v, 1)

    # ------------------------------------------------------------------
    # Hot path
    # ------------------------------------------------------------------

    def _sync_enabled(self, v: int) -> None:
        diff = self.d_r[v] - self.d_b[v]
        if diff >= self.r:
            self.enabled_r.add(v)
        else:
            self.enabled_r.discard(v)
        if -diff >= self.r:
            self.enabled_b.add(v)
        else:
            self.enabled_b.discard(v)

    def _tally(self, v: int, sign: int) -> None:
        dr = self.d_r[v]
        db = self.d_b[v]
        r = self.r
        in_r = dr - db >= r
        in_b = db - dr >= r
        if in_r:
            self.supra_r += sign
        elif in_b:
            self.supra_b += sign
        color = self.colors[v]
        if color == RED:
            if not in_r and dr >= r:
                self.c3_r += sign
            if in_b and dr >= r:
                self.c4_b += sign
        elif color == BLACK:
            if not in_b and db >= r:
                self.c3_b += sign
            if in_r and db >= r:
                self.c4_r += sign

    def add_mark(self, v: int, color: int) -> None:
        """Give node v one more mark of ``color`` (RED or BLACK)."""
        track = self.track_active
        if track:
            self._tally(v, -1)
        if color == RED:
            self.d_r[v] += 1
        else:
            self.d_b[v] += 1
        if self.colors[v] == WHITE:
            self._sync_enabled(v)
        if track:
            self._tally(v, 1)

    def activate(self, v: int, color: int) -> None:
        """Turn white non-seed node v into ``color``."""
        if self.colors[v] != WHITE or self.is_seed[v]:
            raise LedgerInconsistency(f"node {v} is not a white non-seed node")
        track = self.track_active
        if track:
            self._tally(v, -1)
        self.colors[v] = color
        self.white.discard(v)
        self.enabled_r.discard(v)
        self.enabled_b.discard(v)
        self.active.add(v)
        if color == RED:
            self.n_r += 1
        else:
            self.n_b += 1
        if track:
            self._tally(v, 1)

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def supra_color(self, v: int) -> Optional[int]:
        """RED or BLACK if v is suprathreshold for that color, else None."""
        diff = self.d_r[v] - self.d_b[v]
        if diff >= self.r:
            return RED
        if -diff >= self.r:
            return BLACK
        return None

    def susceptible_counts(self) -> Tuple[int, int]:
        """(|S_R|, |S_B|) over all non-seed nodes, active ones included.

        Raises:
            TrackingDisabled: If active nodes are not tracked
        """
        if not self.track_active:
            raise TrackingDisabled("susceptible counts need active-node tracking")
        return self.supra_r, self.supra_b

    def q_value(self, color: int, exact: bool = True) -> int:
        """Q^S for the next step; ``exact=False`` drops the correction terms.

        Raises:
            TrackingDisabled: If active nodes are not tracked
        """
        if not self.track_active:
            raise TrackingDisabled("Q bookkeeping needs active-node tracking")
        if color == RED:
            q = self.supra_r - self.n_r
            if exact:
                q += self.c3_r - self.c4_r
        else:
            q = self.supra_b - self.n_b
            if exact:
                q += self.c3_b - self.c4_b
        return q

    def red_probability(self, exact: bool = True) -> float:
        """|Q^R| / (|Q^R| + |Q^B|), with 0/0 read as 1/2."""
        q_r = abs(self.q_value(RED, exact))
        q_b = abs(self.q_value(BLACK, exact))
        total = q_r + q_b
        return 0.5 if total == 0 else q_r / total

    # ------------------------------------------------------------------
    # Audits
    # ------------------------------------------------------------------

    def check_q_bounds(self) -> None:
        """|S_S| - k <= Q^S <= |S_S| for both colors (tracking only).

        Raises:
            LedgerInconsistency: If a bound fails
        """
        if not self.track_active:
            return
        k = self.k
        for color, supra in ((RED, self.supra_r), (BLACK, self.supra_b)):
            q = self.q_value(color)
            if not supra - k <= q <= supra:
                raise LedgerInconsistency(
                    f"Q bound violated for color {color}: |S|={supra}, k={k}, Q={q}"
                )

    def audit(self, before_termination: bool = True) -> None:
        """Rescan every node and compare with the incremental state.

        Args:
            before_termination: Also require Q^S == |W∩S_S| (valid up to K*)

        Raises:
            LedgerInconsistency: On any mismatch
        """
        r = self.r
        expected_white = set()
        expected_r = set()
        expected_b = set()
        counts = {"supra_r": 0, "supra_b": 0, "c3_r": 0, "c3_b": 0, "c4_r": 0, "c4_b": 0}
        n_r = n_b = 0
        for v in range(self.n):
            if self.is_seed[v]:
                continue
            dr, db, color = self.d_r[v], self.d_b[v], self.colors[v]
            in_r = dr - db >= r
            in_b = db - dr >= r
            if color == WHITE:
                expected_white.add(v)
                if in_r:
                    expected_r.add(v)
                if in_b:
                    expected_b.add(v)
            elif color == RED:
                n_r += 1
            else:
                n_b += 1
            counts["supra_r"] += in_r
            counts["supra_b"] += in_b
            if color == RED:
                counts["c3_r"] += (not in_r) and dr >= r
                counts["c4_b"] += in_b and dr >= r
            elif color == BLACK:
                counts["c3_b"] += (not in_b) and db >= r
                counts["c4_r"] += in_r and db >= r

        if set(self.white) != expected_white:
            raise LedgerInconsistency("white set out of sync")
        if set(self.enabled_r) != expected_r or set(self.enabled_b) != expected_b:
            raise LedgerInconsistency("enabled sets out of sync")
        if (n_r, n_b) != (self.n_r, self.n_b):
            raise LedgerInconsistency(f"activation counters {(self.n_r, self.n_b)} != {(n_r, n_b)}")
        if not self.track_active:
            return
        for name, value in counts.items():
            if getattr(self, name) != value:
                raise LedgerInconsistency(f"{name} = {getattr(self, name)}, rescan gives {value}")
        self.check_q_bounds()
        if before_termination:
            for color, enabled in ((RED, expected_r), (BLACK, expected_b)):
                if self.q_value(color) != len(enabled):
                    raise LedgerInconsistency(
                        f"Q^{color} = {self.q_value(color)} but |W∩S| = {len(enabled)}"
                    )
        logger.debug(f"Ledger audit passed at k={self.k}")

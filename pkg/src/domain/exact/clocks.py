"""Per-node unit-rate Poisson clocks with a query-order independent layout."""

from bisect import bisect_right
from typing import List

import numpy as np

from src.infrastructure.rng import RngStream

INITIAL_POINTS = 16
EXTENSION_POINTS = 64


class ClockBank:
    """Fixed Poisson point sequences, one per node.

    The first INITIAL_POINTS points of every node come from one matrix draw.
    Further points of node v are drawn in blocks from the child stream (v, j),
    so a node's clock does not depend on how far other clocks were read.
    Two runs built from the same stream therefore see identical clocks.
    """

    def __init__(self, n: int, rng: RngStream):
        self._rng = rng
        gaps = rng.generator.standard_exponential((n, INITIAL_POINTS))
        self._points: List[List[float]] = np.cumsum(gaps, axis=1).tolist()
        self._blocks: List[int] = [1] * n

    def _extend(self, v: int) -> None:
        block = self._blocks[v]
        gaps = self._rng.child(v, block).generator.standard_exponential(EXTENSION_POINTS)
        points = self._points[v]
        points.extend((points[-1] + np.cumsum(gaps)).tolist())
        self._blocks[v] = block + 1

    def next_after(self, v: int, t: float) -> float:
        """First clock point of node v strictly after time t."""
        points = self._points[v]
        while points[-1] <= t:
            self._extend(v)
        return points[bisect_right(points, t)]

    def points(self, v: int, count: int) -> List[float]:
        """The first ``count`` clock points of node v."""
        while len(self._points[v]) < count:
            self._extend(v)
        return list(self._points[v][:count])

"""Block-buffered variates and distinct-recipient sampling.

Per-call numpy overhead dominates when one run needs millions of scalar
draws, so uniforms and exponentials are drawn in blocks and handed out one
at a time. Consumption order is a pure function of the run, which keeps runs
bit-reproducible.
"""

from typing import List, Optional

import numpy as np

BLOCK_SIZE = 4096

# Above this fill ratio rejection sampling wastes draws; use a permutation.
DENSE_FRACTION = 0.25


class UniformBuffer:
    """Uniform(0, 1) variates drawn in blocks from one generator."""

    __slots__ = ("generator", "_block", "_values", "_next")

    def __init__(self, generator: np.random.Generator, block: int = BLOCK_SIZE):
        self.generator = generator
        self._block = block
        self._values: List[float] = []
        self._next = 0

    def __call__(self) -> float:
        if self._next == len(self._values):
            self._values = self.generator.random(self._block).tolist()
            self._next = 0
        value = self._values[self._next]
        self._next += 1
        return value

    def index(self, size: int) -> int:
        """Uniform integer in 0..size-1."""
        i = int(self() * size)
        return i if i < size else size - 1


class ExponentialBuffer:
    """Exp(1) variates drawn in blocks; divide by a rate to rescale."""

    __slots__ = ("generator", "_block", "_values", "_next")

    def __init__(self, generator: np.random.Generator, block: int = BLOCK_SIZE):
        self.generator = generator
        self._block = block
        self._values: List[float] = []
        self._next = 0

    def __call__(self) -> float:
        if self._next == len(self._values):
            self._values = self.generator.standard_exponential(self._block).tolist()
            self._next = 0
        value = self._values[self._next]
        self._next += 1
        return value


def distinct_indices(uniforms: UniformBuffer, pool_size: int, count: int) -> List[int]:
    """``count`` distinct indices uniform over 0..pool_size-1.

    Sparse requests use rejection on uniform indices; dense ones fall back
    to a partial permutation from the same generator.
    """
    if count <= 0:
        return []
    if count >= pool_size:
        return list(range(pool_size))
    if count > DENSE_FRACTION * pool_size:
        return uniforms.generator.choice(pool_size, size=count, replace=False).tolist()
    picked = set()
    chosen = []
    while len(chosen) < count:
        i = uniforms.index(pool_size)
        if i not in picked:
            picked.add(i)
            chosen.append(i)
    return chosen


def binomial_recipients(
    uniforms: UniformBuffer,
    pool_size: int,
    p: float,
    counts: Optional[np.random.Generator] = None,
) -> List[int]:
    """Indices that each independently succeed with probability p.

    Equal in law to pool_size Bernoulli(p) trials: draw the success count
    from Bin(pool_size, p), then that many distinct uniform indices.

    Args:
        uniforms: Buffer the recipient indices are drawn from
        pool_size: Number of candidates
        p: Success probability per candidate
        counts: Generator for the success count (defaults to the buffer's)
    """
    if pool_size <= 0:
        return []
    generator = counts if counts is not None else uniforms.generator
    count = int(generator.binomial(pool_size, p))
    return distinct_indices(uniforms, pool_size, count)

"""Deterministic random streams keyed by integer ids.

Streams are PCG64 generators seeded from a numpy ``SeedSequence`` whose spawn
key is the stream id. The same (master seed, stream id) always reproduces the
same draws, and distinct ids give independent sequences, so replication r at
sweep point s can run anywhere with ``RngStream(seed, (s, r))``.
"""

from typing import Iterable, Tuple, Union

import numpy as np

StreamId = Tuple[int, ...]

# Child labels used by the simulators. Fixed so that runs stay reproducible
# when a simulator starts drawing from an additional child.
SEEDS = 1
GRAPH = 2
CLOCKS = 3
SELECTION = 4
SOJOURN = 5
MARK_COUNTS = 6
RECIPIENTS = 7
COLORS = 8
INITIAL_MARKS = 9
REUNVEIL = 10


def _as_key(stream_id: Union[int, Iterable[int]]) -> StreamId:
    if isinstance(stream_id, (int, np.integer)):
        return (int(stream_id),)
    return tuple(int(part) for part in stream_id)


class RngStream:
    """Single-owner random stream.

    Attributes:
        master_seed: 64-bit seed shared by every stream of an experiment
        stream_id: Tuple of non-negative ints naming this stream
        generator: numpy Generator the stream draws from
    """

    def __init__(self, master_seed: int, stream_id: Union[int, Iterable[int]] = ()):
        if master_seed < 0:
            raise ValueError(f"master seed must be non-negative, got {master_seed}")
        self.master_seed = int(master_seed)
        self.stream_id: StreamId = _as_key(stream_id)
        if any(part < 0 for part in self.stream_id):
            raise ValueError(f"stream id parts must be non-negative: {self.stream_id}")
        self._sequence = np.random.SeedSequence(
            entropy=self.master_seed, spawn_key=self.stream_id
        )
        self.generator = np.random.Generator(np.random.PCG64(self._sequence))

    def child(self, *ids: int) -> "RngStream":
        """Independent sub-stream whose id extends this one.

        A child does not consume draws from its parent, so the order in which
        children are created does not matter.
        """
        return RngStream(self.master_seed, self.stream_id + tuple(ids))

    def seed_sequence(self) -> np.random.SeedSequence:
        """The SeedSequence behind this stream (for libraries that take one)."""
        return np.random.SeedSequence(entropy=self.master_seed, spawn_key=self.stream_id)

    def integer_seed(self) -> int:
        """A 32-bit integer seed derived from the stream, for seed=int APIs."""
        return int(self.seed_sequence().generate_state(1, dtype=np.uint32)[0])

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, stream_id={self.stream_id})"

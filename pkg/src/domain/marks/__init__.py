"""Mark bookkeeping shared by the exact and chain simulators."""

from src.domain.marks.ledger import BLACK, RED, WHITE, IndexedSet, MarkLedger
from src.domain.marks.sampling import (
    ExponentialBuffer,
    UniformBuffer,
    binomial_recipients,
    distinct_indices,
)

__all__ = [
    "BLACK",
    "ExponentialBuffer",
    "IndexedSet",
    "MarkLedger",
    "RED",
    "UniformBuffer",
    "WHITE",
    "binomial_recipients",
    "distinct_indices",
]

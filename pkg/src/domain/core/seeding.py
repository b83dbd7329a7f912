"""Uniform seed placement, including the nested placement used for couplings."""

from typing import FrozenSet, Tuple

from src.domain.models.errors import HardInvariantViolation
from src.domain.models.params import ModelParams
from src.infrastructure.rng import RngStream

SeedSets = Tuple[FrozenSet[int], FrozenSet[int]]


def make_seeds(params: ModelParams, rng: RngStream) -> SeedSets:
    """Choose a_R red seeds uniformly, then a_B black seeds from the rest.

    Node ids are 0..n-1.

    Returns:
        (red seeds, black seeds), disjoint

    Raises:
        HardInvariantViolation: If a_R + a_B > n
    """
    total = params.a_r + params.a_b
    if total > params.n or params.a_r < 0 or params.a_b < 0:
        raise HardInvariantViolation(
            f"cannot place {params.a_r}+{params.a_b} seeds on {params.n} nodes"
        )
    chosen = rng.generator.choice(params.n, size=total, replace=False)
    red = frozenset(int(v) for v in chosen[: params.a_r])
    black = frozenset(int(v) for v in chosen[params.a_r :])
    return red, black


def make_coupled_seeds(
    n: int,
    first: Tuple[int, int],
    second: Tuple[int, int],
    rng: RngStream,
) -> Tuple[SeedSets, SeedSets]:
    """Seed sets for two instances sharing one random permutation.

    Red seeds are a prefix and black seeds a suffix of the same permutation,
    so fewer red seeds give a subset and fewer black seeds give a subset.
    Each pair is uniformly placed on its own.

    Args:
        n: Number of nodes
        first: (a_R, a_B) of the first instance
        second: (a_R, a_B) of the second instance
        rng: Stream for the permutation

    Returns:
        ((red_1, black_1), (red_2, black_2))

    Raises:
        HardInvariantViolation: If red and black seeds would overlap in either
            instance
    """
    for a_r, a_b in (first, second):
        if a_r < 0 or a_b < 0 or a_r + a_b > n:
            raise HardInvariantViolation(f"cannot place {a_r}+{a_b} seeds on {n} nodes")
    order = [int(v) for v in rng.generator.permutation(n)]

    def _sets(a_r: int, a_b: int) -> SeedSets:
        return frozenset(order[:a_r]), frozenset(order[n - a_b :] if a_b else ())

    return _sets(*first), _sets(*second)

"""Explicit G(n, p) adjacency for the reference simulator."""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import networkx as nx

from src.domain.models.errors import CapExceeded, HardInvariantViolation
from src.domain.models.params import ModelParams
from src.infrastructure.config import get_settings
from src.infrastructure.rng import RngStream

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExplicitGraph:
    """Undirected simple graph on nodes 0..n-1.

    Attributes:
        n: Number of nodes
        adjacency: Sorted neighbor tuple per node
    """

    n: int
    adjacency: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "ExplicitGraph":
        n = graph.number_of_nodes()
        return cls(n=n, adjacency=tuple(tuple(sorted(graph.adj[v])) for v in range(n)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "ExplicitGraph":
        """Build a graph from an edge list (test hook for fixed instances).

        Raises:
            HardInvariantViolation: On self-loops or out-of-range endpoints
        """
        graph = nx.empty_graph(n)
        for u, v in edges:
            if u == v:
                raise HardInvariantViolation(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise HardInvariantViolation(f"edge ({u}, {v}) outside 0..{n - 1}")
            graph.add_edge(u, v)
        return cls.from_networkx(graph)

    @property
    def edge_count(self) -> int:
        return sum(len(neighbors) for neighbors in self.adjacency) // 2

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def is_symmetric(self) -> bool:
        """u in adj(v) iff v in adj(u), and no self-loops."""
        for v, neighbors in enumerate(self.adjacency):
            for u in neighbors:
                if u == v or v not in self.adjacency[u]:
                    return False
        return True


def generate_graph(
    params: ModelParams,
    rng: RngStream,
    max_nodes: Optional[int] = None,
) -> ExplicitGraph:
    """Sample G(n, p) with every unordered pair present independently.

    Args:
        params: Instance (uses n and p)
        rng: Stream the networkx generator is seeded from
        max_nodes: Hard cap on n (defaults to the configured exact_max_nodes)

    Returns:
        ExplicitGraph with sorted adjacency tuples

    Raises:
        CapExceeded: If n exceeds the cap
    """
    cap = max_nodes if max_nodes is not None else get_settings().exact_max_nodes
    if params.n > cap:
        raise CapExceeded(f"n = {params.n} exceeds the exact-simulator cap of {cap}")
    graph = nx.fast_gnp_random_graph(params.n, params.p, seed=rng.integer_seed())
    explicit = ExplicitGraph.from_networkx(graph)
    logger.debug(f"Generated G({params.n}, {params.p}) with {explicit.edge_count} edges")
    return explicit

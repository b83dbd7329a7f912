"""Reference simulator on an explicit random graph."""

from src.domain.exact.clocks import ClockBank
from src.domain.exact.graph import ExplicitGraph, generate_graph
from src.domain.exact.simulator import (
    ExactSimulator,
    embedded_chain,
    run_coupled_pair,
    run_exact,
)

__all__ = [
    "ClockBank",
    "ExactSimulator",
    "ExplicitGraph",
    "embedded_chain",
    "generate_graph",
    "run_coupled_pair",
    "run_exact",
]

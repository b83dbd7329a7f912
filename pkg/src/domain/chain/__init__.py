"""Embedded-chain simulator with lazily unveiled edges."""

from src.domain.chain.simulator import ChainSimulator, run_chain

__all__ = ["ChainSimulator", "run_chain"]

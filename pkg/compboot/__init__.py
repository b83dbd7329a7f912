"""Competing two-color bootstrap percolation toolkit."""

__version__ = "0.1.0"

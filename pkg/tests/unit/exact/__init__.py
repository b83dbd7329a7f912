"""Unit tests for the explicit-graph simulator."""

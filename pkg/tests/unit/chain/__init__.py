"""Unit tests for the chain simulator."""

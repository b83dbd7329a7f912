"""Unit tests for the theory engine."""

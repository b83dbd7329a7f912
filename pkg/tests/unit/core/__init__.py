"""Unit tests for the core layer."""

"""Unit tests for domain models."""

"""Command-line interface for the compboot toolkit."""

"""Experiment harness: plans, aggregation, figure data and check suites."""

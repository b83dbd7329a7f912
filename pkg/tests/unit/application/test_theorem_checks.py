"""Unit tests for the check helpers and the closed-form suite."""

import numpy as np
import pytest

from src.application.theorem_checks import (
    CheckResult,
    Suite,
    SuiteReport,
    at_least,
    cdf_excess,
    dkw_epsilon,
    merged_chisquare,
    relative_check,
    theorem_checks,
    total_variation,
)


@pytest.mark.unit
class TestHelpers:
    """Tests for the statistical helpers."""

    def test_chisquare_accepts_binomial_sample(self):
        """A genuine Bin(20, 0.3) sample is not rejected."""
        values = np.random.default_rng(5).binomial(20, 0.3, size=4000)
        pvalue, bins = merged_chisquare(values, 20, 0.3)
        assert bins > 3
        assert pvalue > 1e-3

    def test_chisquare_rejects_shifted_sample(self):
        """A Bin(20, 0.5) sample fails against Bin(20, 0.3)."""
        values = np.random.default_rng(5).binomial(20, 0.5, size=4000)
        pvalue, _ = merged_chisquare(values, 20, 0.3)
        assert pvalue < 1e-6

    def test_chisquare_single_bin(self):
        """A degenerate law has one bin and p-value 1."""
        pvalue, bins = merged_chisquare(np.zeros(10, dtype=int), 5, 0.0)
        assert (pvalue, bins) == (1.0, 1)

    def test_total_variation(self):
        """Identical laws are at distance 0, disjoint ones at 1."""
        law = {(1, 2): 3, (2, 1): 1}
        assert total_variation(law, {(1, 2): 6, (2, 1): 2}) == pytest.approx(0.0)
        assert total_variation(law, {(0, 0): 4}) == pytest.approx(1.0)

    def test_dkw_epsilon(self):
        """The DKW band shrinks as one over the square root of the sample size."""
        assert dkw_epsilon(100, 0.05) == pytest.approx(0.13581, abs=1e-5)
        assert dkw_epsilon(400, 0.05) == pytest.approx(dkw_epsilon(100, 0.05) / 2)
        with pytest.raises(ValueError):
            dkw_epsilon(0)

    def test_cdf_excess_within_band_for_same_law(self):
        """A Bin(30, 0.2) sample stays inside the band on both sides."""
        values = np.random.default_rng(8).binomial(30, 0.2, size=3000)
        above, below = cdf_excess(values, 30, 0.2)
        epsilon = dkw_epsilon(len(values))
        assert above <= epsilon
        assert below <= epsilon

    def test_cdf_excess_detects_ordering(self):
        """A sample larger in law than the reference only shows a one-sided excess."""
        values = np.random.default_rng(8).binomial(30, 0.4, size=3000)
        above, below = cdf_excess(values, 30, 0.2)
        epsilon = dkw_epsilon(len(values))
        assert above <= epsilon
        assert below > 0.5

    def test_relative_and_bound_checks(self):
        """Relative checks use |target| as scale; NaN never passes."""
        assert relative_check("x", 1.04, 1.0, 0.05).passed
        assert not relative_check("x", float("nan"), 1.0, 0.05).passed
        assert at_least("y", 2.0, 2.0).passed


@pytest.mark.unit
class TestSuiteReport:
    """Tests for SuiteReport."""

    def test_passed_and_rows(self):
        """A report passes only when every check does."""
        report = SuiteReport(Suite.TIMING, 0.5, 1)
        report.checks.append(CheckResult("a", True, 1.0, 1.0, 0.1))
        assert report.passed
        report.checks.append(CheckResult("b", False, 2.0, 1.0, 0.1, "rel"))
        assert not report.passed
        rows = list(report.rows())
        assert rows[1] == ("timing", "b", False, 2.0, 1.0, 0.1, "rel")
        assert len(rows[0]) == len(SuiteReport.CSV_HEADER)


@pytest.mark.unit
class TestTheoremChecks:
    """Tests for theorem_checks."""

    @pytest.mark.parametrize("scale", [0.0, 1.5, -1.0])
    def test_scale_range(self, scale):
        """scale must lie in (0, 1]."""
        with pytest.raises(ValueError, match="scale"):
            theorem_checks(Suite.CLOSED_FORM, scale=scale)

    def test_closed_form_suite_passes(self):
        """The r = 2 closed forms agree with quadrature and the ODE."""
        report = theorem_checks(Suite.CLOSED_FORM)
        assert report.passed, [check.to_dict() for check in report.checks if not check.passed]
        assert len(report.checks) == 5

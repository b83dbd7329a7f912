"""Unit tests for parameter validation and the critical size g."""

import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.domain.core import validation
from src.domain.core.validation import g_critical, regime_warnings, validate
from src.domain.models.errors import HardInvariantViolation
from src.domain.models.params import ModelParams


@pytest.mark.unit
class TestGCritical:
    """Tests for g_critical."""

    def test_canonical_instance(self):
        """g(1e5, 1e-4, 2) = 500."""
        assert g_critical(100_000, 1e-4, 2) == pytest.approx(500.0, rel=1e-12)

    def test_larger_graph(self):
        """g(1e6, 1e-4, 2) = 50."""
        assert g_critical(1_000_000, 1e-4, 2) == pytest.approx(50.0, rel=1e-12)

    def test_threshold_three(self):
        """For r = 3, g = (2/3) * sqrt(2 / (n p^3))."""
        n, p = 1_000_000, 1e-3
        expected = (2.0 / 3.0) * (2.0 / (n * p**3)) ** 0.5
        assert g_critical(n, p, 3) == pytest.approx(expected, rel=1e-12)

    @settings(max_examples=300, deadline=None)
    @given(
        n=st.integers(min_value=3, max_value=10**9),
        step=st.integers(min_value=1, max_value=10**6),
        p=st.floats(min_value=1e-8, max_value=0.5),
        r=st.integers(min_value=2, max_value=6),
    )
    def test_strictly_decreasing_in_n(self, n, step, p, r):
        """A larger graph has a strictly smaller critical size."""
        assert g_critical(n + step, p, r) < g_critical(n, p, r)

    @settings(max_examples=300, deadline=None)
    @given(
        n=st.integers(min_value=3, max_value=10**9),
        p=st.floats(min_value=1e-8, max_value=0.4),
        factor=st.floats(min_value=1.001, max_value=2.0),
        r=st.integers(min_value=2, max_value=6),
    )
    def test_strictly_decreasing_in_p(self, n, p, factor, r):
        """A denser graph has a strictly smaller critical size."""
        assert g_critical(n, p * factor, r) < g_critical(n, p, r)

    def test_rejects_bad_threshold(self):
        """r must be at least 2."""
        with pytest.raises(HardInvariantViolation):
            g_critical(1000, 0.01, 1)


@pytest.mark.unit
class TestValidate:
    """Tests for validate()."""

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n=2, p=0.5, r=2, a_r=0, a_b=0),
            dict(n=100, p=0.0, r=2, a_r=1, a_b=1),
            dict(n=100, p=1.0, r=2, a_r=1, a_b=1),
            dict(n=100, p=0.1, r=1, a_r=1, a_b=1),
            dict(n=100, p=0.1, r=2, a_r=-1, a_b=1),
            dict(n=100, p=0.1, r=2, a_r=60, a_b=41),
            dict(n=100, p=0.1, r=2, a_r=60, a_b=40),
        ],
    )
    def test_hard_violations(self, kwargs):
        """Instances outside the model raise HardInvariantViolation."""
        with pytest.raises(HardInvariantViolation):
            validate(ModelParams(**kwargs))

    def test_seed_out_of_range(self):
        """Master seeds are 64-bit unsigned."""
        with pytest.raises(HardInvariantViolation, match="64-bit"):
            validate(ModelParams(n=100, p=0.1, r=2, a_r=1, a_b=1, seed=2**64))

    def test_valid_instance(self):
        """A canonical instance validates without error."""
        validate(ModelParams(n=100_000, p=1e-4, r=2, a_r=400, a_b=250))

    def test_soft_warnings_logged_once(self, caplog):
        """Regime warnings are logged, once per (n, p, r)."""
        validation._warn_once.cache_clear()
        params = ModelParams(n=200, p=0.001, r=2, a_r=3, a_b=1)
        with caplog.at_level(logging.WARNING, logger="src.domain.core.validation"):
            validate(params)
            validate(params.with_seeds(4, 2))
        messages = [r.message for r in caplog.records if "Soft regime" in r.message]
        assert len(messages) == 1


@pytest.mark.unit
class TestRegimeWarnings:
    """Tests for the soft regime conditions."""

    def test_sparse_graph(self):
        """n p <= 1 is flagged."""
        warnings = regime_warnings(ModelParams(n=1000, p=0.0005, r=2, a_r=1, a_b=1))
        assert any("connectivity" in w for w in warnings)

    def test_dense_graph(self):
        """p too large for the bootstrap window is flagged."""
        warnings = regime_warnings(ModelParams(n=1000, p=0.1, r=2, a_r=1, a_b=1))
        assert any("bootstrap window" in w for w in warnings)

    def test_comfortable_instance(self):
        """The canonical instance raises no warning."""
        assert regime_warnings(ModelParams(n=100_000, p=1e-4, r=2, a_r=1, a_b=1)) == []

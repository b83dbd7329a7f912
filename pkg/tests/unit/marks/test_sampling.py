"""Unit tests for buffered variates and recipient sampling."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.domain.marks.sampling import (
    ExponentialBuffer,
    UniformBuffer,
    binomial_recipients,
    distinct_indices,
)


@pytest.fixture
def uniforms():
    """Uniform buffer with a small block so refills are exercised."""
    return UniformBuffer(np.random.default_rng(5), block=8)


@pytest.mark.unit
class TestBuffers:
    """Tests for UniformBuffer and ExponentialBuffer."""

    def test_matches_block_draws(self):
        """Buffered values are the generator's block draws in order."""
        buffer = UniformBuffer(np.random.default_rng(1), block=4)
        values = [buffer() for _ in range(6)]
        reference = np.random.default_rng(1)
        expected = reference.random(4).tolist() + reference.random(4).tolist()[:2]
        assert values == expected

    def test_index_in_range(self, uniforms):
        """index(size) stays in 0..size-1."""
        assert all(0 <= uniforms.index(3) < 3 for _ in range(100))

    def test_exponential_positive(self):
        """Exponential variates are positive with mean near one."""
        buffer = ExponentialBuffer(np.random.default_rng(2))
        values = [buffer() for _ in range(5000)]
        assert min(values) > 0
        assert np.mean(values) == pytest.approx(1.0, abs=0.05)


@pytest.mark.unit
class TestDistinctIndices:
    """Tests for distinct_indices."""

    @settings(max_examples=60, deadline=None)
    @given(pool=st.integers(min_value=1, max_value=400), data=st.data())
    def test_distinct_and_in_range(self, pool, data):
        """Any request returns min(count, pool) distinct in-range indices."""
        count = data.draw(st.integers(min_value=0, max_value=pool + 5))
        chosen = distinct_indices(UniformBuffer(np.random.default_rng(pool)), pool, count)
        assert len(chosen) == min(count, pool)
        assert len(set(chosen)) == len(chosen)
        assert all(0 <= i < pool for i in chosen)

    def test_uniform_coverage(self, uniforms):
        """Sparse picks hit every index at roughly the same rate."""
        hits = np.zeros(10)
        for _ in range(4000):
            for i in distinct_indices(uniforms, 10, 2):
                hits[i] += 1
        assert hits.min() > 0.8 * 800 and hits.max() < 1.2 * 800


@pytest.mark.unit
class TestBinomialRecipients:
    """Tests for binomial_recipients."""

    def test_empty_pool(self, uniforms):
        """No candidates, no recipients."""
        assert binomial_recipients(uniforms, 0, 0.5) == []

    def test_certain_success(self, uniforms):
        """p = 1 marks every candidate."""
        assert sorted(binomial_recipients(uniforms, 12, 1.0)) == list(range(12))

    def test_mean_count(self):
        """The recipient count averages pool_size * p."""
        buffer = UniformBuffer(np.random.default_rng(9))
        counts = np.random.default_rng(10)
        sizes = [len(binomial_recipients(buffer, 200, 0.05, counts)) for _ in range(2000)]
        assert np.mean(sizes) == pytest.approx(10.0, rel=0.05)

"""Unit tests for keyed random streams."""

import numpy as np
import pytest

from src.infrastructure.rng import RngStream


@pytest.mark.unit
class TestRngStream:
    """Tests for RngStream."""

    def test_reproducible(self):
        """Same master seed and id give the same draws."""
        first = RngStream(42, (3, 5)).generator.random(10)
        second = RngStream(42, (3, 5)).generator.random(10)
        np.testing.assert_array_equal(first, second)

    def test_distinct_ids_differ(self):
        """Different ids give different sequences."""
        first = RngStream(42, (3, 5)).generator.random(10)
        second = RngStream(42, (3, 6)).generator.random(10)
        assert not np.array_equal(first, second)

    def test_int_id_equals_one_tuple(self):
        """An int id is the one-element tuple id."""
        assert RngStream(1, 7).stream_id == (7,)
        np.testing.assert_array_equal(
            RngStream(1, 7).generator.random(4), RngStream(1, (7,)).generator.random(4)
        )

    def test_child_does_not_consume_parent(self):
        """Creating children leaves the parent's draws unchanged."""
        parent = RngStream(9)
        parent.child(1)
        parent.child(2, 3)
        np.testing.assert_array_equal(parent.generator.random(5), RngStream(9).generator.random(5))

    def test_child_id_extends_parent(self):
        """child(*ids) is the stream with the concatenated id."""
        child = RngStream(9, (1,)).child(2, 3)
        assert child.stream_id == (1, 2, 3)
        np.testing.assert_array_equal(
            child.generator.random(3), RngStream(9, (1, 2, 3)).generator.random(3)
        )

    def test_integer_seed_stable(self):
        """integer_seed is a deterministic 32-bit value."""
        seed = RngStream(5, (2,)).integer_seed()
        assert seed == RngStream(5, (2,)).integer_seed()
        assert 0 <= seed < 2**32

    def test_negative_values_rejected(self):
        """Master seed and id parts are non-negative."""
        with pytest.raises(ValueError):
            RngStream(-1)
        with pytest.raises(ValueError):
            RngStream(1, (2, -3))

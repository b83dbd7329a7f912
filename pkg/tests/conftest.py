"""Root conftest.py to make fixtures available across all test modules."""

import sys
from pathlib import Path

import pytest

# Add the project root and src to path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))
sys.path.insert(0, str(project_root))

from src.domain.models.params import ModelParams  # noqa: E402
from src.infrastructure.config import reset_settings  # noqa: E402
from src.infrastructure.rng import RngStream  # noqa: E402


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Give every test settings read from a CB_-free environment."""
    for name in ("CB_THREADS", "CB_LOG_LEVEL", "CB_AUDIT", "CB_BUDGET", "CB_EXACT_MAX_NODES"):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def small_params() -> ModelParams:
    """Instance small enough for the exact simulator and quick chain runs.

    n p = 6 and a_R, a_B well above the activation threshold, so runs do
    spread but finish in a few hundred steps.
    """
    return ModelParams(n=300, p=0.02, r=2, a_r=12, a_b=6, seed=7)


@pytest.fixture
def rng() -> RngStream:
    """Fresh stream with a fixed master seed."""
    return RngStream(2024)

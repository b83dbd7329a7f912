"""Instance validation, critical size and seed placement."""

from src.domain.core.seeding import make_coupled_seeds, make_seeds
from src.domain.core.validation import g_critical, regime_warnings, validate

__all__ = [
    "g_critical",
    "make_coupled_seeds",
    "make_seeds",
    "regime_warnings",
    "validate",
]

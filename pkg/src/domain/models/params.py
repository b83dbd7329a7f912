"""Instance parameters, asymptotic regime declarations and node colors."""

import math
from dataclasses import dataclass, replace
from enum import Enum, IntEnum
from typing import Any, Dict, Optional, Tuple

from src.domain.models.errors import HardInvariantViolation

# Relative tolerance under which alpha_R and alpha_B count as equal.
ALPHA_EQUALITY_RTOL = 1e-12


class NodeColor(IntEnum):
    """State of a node. Transitions are only WHITE -> RED or WHITE -> BLACK."""

    WHITE = 0
    RED = 1
    BLACK = 2

    @property
    def opposite(self) -> "NodeColor":
        """The competing color (undefined for WHITE)."""
        if self is NodeColor.WHITE:
            raise ValueError("WHITE has no opposite color")
        return NodeColor.BLACK if self is NodeColor.RED else NodeColor.RED

    @property
    def label(self) -> str:
        """One-letter label used in exports (W, R, B)."""
        return {0: "W", 1: "R", 2: "B"}[int(self)]


class Regime(Enum):
    """Scaling of the time-scale q relative to g and 1/p."""

    Q_EQUALS_G = "q_equals_g"
    G_LL_Q_LL_PINV = "g_ll_q_ll_pinv"
    Q_EQUALS_PINV = "q_equals_pinv"
    PINV_LL_Q_LL_N = "pinv_ll_q_ll_n"

    @property
    def decoupled(self) -> bool:
        """Whether beta_S depends on x_S only (q much smaller than 1/p)."""
        return self in (Regime.Q_EQUALS_G, Regime.G_LL_Q_LL_PINV)


@dataclass(frozen=True)
class ModelParams:
    """A finite instance of the competing process.

    Attributes:
        n: Number of nodes
        p: Edge probability of G(n, p)
        r: Activation threshold (margin of same-color over other-color neighbors)
        a_r: Number of red seeds
        a_b: Number of black seeds
        seed: Master RNG seed (64-bit)
    """

    n: int
    p: float
    r: int
    a_r: int
    a_b: int
    seed: int = 0

    @property
    def n_white(self) -> int:
        """Number of non-seed nodes."""
        return self.n - self.a_r - self.a_b

    def with_seeds(self, a_r: int, a_b: int) -> "ModelParams":
        """Copy with different seed counts."""
        return replace(self, a_r=a_r, a_b=a_b)

    def to_dict(self) -> Dict[str, Any]:
        """Serialize using the config-file key names."""
        return {
            "n": self.n,
            "p": self.p,
            "r": self.r,
            "a_R": self.a_r,
            "a_B": self.a_b,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class RegimeSpec:
    """Asymptotic scaling declaration attached to an instance.

    Attributes:
        regime: Which of the four q-regimes the instance is meant to sample
        alpha_r: Limit of a_R / q
        alpha_b: Limit of a_B / q
        q: Concrete time-scale value for the instance

    Raises:
        HardInvariantViolation: If alpha_R <= alpha_B, alpha_B <= 0 or q <= 0.
            alpha_R equal to alpha_B within ALPHA_EQUALITY_RTOL is rejected.
    """

    regime: Regime
    alpha_r: float
    alpha_b: float
    q: float

    def __post_init__(self):
        if self.alpha_b <= 0:
            raise HardInvariantViolation(f"alpha_B must be positive, got {self.alpha_b}")
        if math.isclose(self.alpha_r, self.alpha_b, rel_tol=ALPHA_EQUALITY_RTOL):
            raise HardInvariantViolation(
                f"alpha_R == alpha_B ({self.alpha_r}) is not supported"
            )
        if self.alpha_r < self.alpha_b:
            raise HardInvariantViolation(
                f"alpha_R ({self.alpha_r}) must exceed alpha_B ({self.alpha_b})"
            )
        if not self.q > 0:
            raise HardInvariantViolation(f"q must be positive, got {self.q}")

    @classmethod
    def for_instance(
        cls,
        regime: Regime,
        alpha_r: float,
        alpha_b: float,
        n: int,
        p: float,
        r: int,
        q: Optional[float] = None,
    ) -> "RegimeSpec":
        """Build a regime spec, filling q where the regime pins it down.

        q defaults to g_critical(n, p, r) for Q_EQUALS_G and to 1/p for
        Q_EQUALS_PINV. The other two regimes need an explicit q.

        Raises:
            HardInvariantViolation: If q is missing for a free regime, or a
                given q contradicts q = g for Q_EQUALS_G.
        """
        from src.domain.core.validation import g_critical

        if regime is Regime.Q_EQUALS_G:
            g = g_critical(n, p, r)
            if q is not None and not math.isclose(q, g, rel_tol=1e-9):
                raise HardInvariantViolation(
                    f"regime q_equals_g requires q = g = {g}, got {q}"
                )
            q = g
        elif regime is Regime.Q_EQUALS_PINV and q is None:
            q = 1.0 / p
        if q is None:
            raise HardInvariantViolation(f"regime {regime.value} needs an explicit q")
        return cls(regime=regime, alpha_r=alpha_r, alpha_b=alpha_b, q=float(q))

    def seed_counts(self) -> Tuple[int, int]:
        """Integer seed counts floor(alpha_S * q) for (red, black)."""
        return math.floor(self.alpha_r * self.q), math.floor(self.alpha_b * self.q)

    def to_dict(self) -> Dict[str, Any]:
        """Serialize using the config-file key names."""
        return {
            "regime": self.regime.value,
            "alpha_R": self.alpha_r,
            "alpha_B": self.alpha_b,
            "q": self.q,
        }

"""Flat ``key = value`` run configuration files and command-line overrides.

A config file holds one assignment per line. ``#`` starts a comment, blank
lines are skipped, and ``sweep.<param> = v1,v2,...`` declares a sweep axis:

    n = 100000
    p = 1e-4
    r = 2
    regime = q_equals_g
    alpha_R = 0.8
    alpha_B = 0.5
    sweep.alpha_R = 0.6,0.8
"""

import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.domain.core.validation import g_critical
from src.domain.models.errors import ConfigError, HardInvariantViolation
from src.domain.models.params import ModelParams, Regime, RegimeSpec

logger = logging.getLogger(__name__)

SWEEP_PREFIX = "sweep."

# Config-file spelling of every key.
CONFIG_KEYS = ("n", "p", "r", "a_R", "a_B", "seed", "regime", "alpha_R", "alpha_B", "q")


def _integer(value: Any) -> Any:
    """Accept "100000" as well as "1e5" for integer keys."""
    if isinstance(value, str):
        text = value.strip()
        try:
            return int(text)
        except ValueError:
            number = float(text)
            if not number.is_integer():
                raise ValueError(f"{value!r} is not an integer") from None
            return int(number)
    return value


class RunConfig(BaseModel):
    """Validated contents of a config file plus overrides.

    Attributes:
        n: Number of nodes
        p: Edge probability
        r: Activation threshold
        a_r: Red seeds (derived from the regime when missing)
        a_b: Black seeds (derived from the regime when missing)
        seed: Master seed
        regime: Declared q-regime
        alpha_r: Red seed density
        alpha_b: Black seed density
        q: Time-scale (defaults to g for q_equals_g, 1/p for q_equals_pinv)
        sweep: Sweep axes, parameter name -> values
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    n: Optional[int] = Field(default=None, ge=3)
    p: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    r: int = Field(default=2, ge=2)
    a_r: Optional[int] = Field(default=None, alias="a_R", ge=0)
    a_b: Optional[int] = Field(default=None, alias="a_B", ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    regime: Optional[Regime] = None
    alpha_r: Optional[float] = Field(default=None, alias="alpha_R", gt=0.0)
    alpha_b: Optional[float] = Field(default=None, alias="alpha_B", gt=0.0)
    q: Optional[float] = Field(default=None, gt=0.0)
    sweep: Dict[str, List[float]] = Field(default_factory=dict)

    @field_validator("n", "r", "a_r", "a_b", "seed", mode="before")
    @classmethod
    def _normalize_integers(cls, value: Any) -> Any:
        return _integer(value)

    @property
    def has_regime(self) -> bool:
        return self.regime is not None and self.alpha_r is not None and self.alpha_b is not None

    def regime_spec(self) -> Optional[RegimeSpec]:
        """The declared regime, or None when regime or densities are missing.

        Raises:
            ConfigError: If the regime needs n and p (or an explicit q) that are absent
        """
        if not self.has_regime:
            return None
        if self.regime is Regime.Q_EQUALS_G and (self.n is None or self.p is None):
            raise ConfigError("regime q_equals_g needs n and p to compute q = g")
        if self.regime is Regime.Q_EQUALS_PINV and self.q is None and self.p is None:
            raise ConfigError("regime q_equals_pinv needs p (or q) to compute q = 1/p")
        try:
            return RegimeSpec.for_instance(
                self.regime,
                self.alpha_r,
                self.alpha_b,
                self.n or 0,
                self.p or 0.5,
                self.r,
                self.q,
            )
        except HardInvariantViolation as e:
            raise ConfigError(str(e)) from e

    def seed_rounding(self) -> Optional[str]:
        """Rounding rule used for derived seed counts, None when none was derived."""
        return "floor" if self.has_regime and (self.a_r is None or self.a_b is None) else None

    def model_params(self) -> ModelParams:
        """Finite instance described by the config.

        Raises:
            ConfigError: If n, p or a seed count cannot be determined
        """
        if self.n is None or self.p is None:
            raise ConfigError("config must set n and p")
        a_r, a_b = self.a_r, self.a_b
        if a_r is None or a_b is None:
            spec = self.regime_spec()
            if spec is None:
                raise ConfigError("set a_R and a_B, or regime with alpha_R and alpha_B")
            derived_r, derived_b = spec.seed_counts()
            a_r = derived_r if a_r is None else a_r
            a_b = derived_b if a_b is None else a_b
            logger.info(f"Derived seed counts a_R={a_r}, a_B={a_b} from q={spec.q:.6g}")
        return ModelParams(n=self.n, p=self.p, r=self.r, a_r=a_r, a_b=a_b, seed=self.seed)

    def scale(self) -> float:
        """Normalizing q: the declared q, else g for the instance."""
        spec = self.regime_spec()
        if spec is not None:
            return spec.q
        if self.q is not None:
            return self.q
        if self.n is None or self.p is None:
            raise ConfigError("cannot determine q without n and p")
        return g_critical(self.n, self.p, self.r)

    def to_dict(self) -> Dict[str, Any]:
        """Config-file spelling of every set key."""
        data = self.model_dump(by_alias=True, exclude_none=True, exclude={"sweep"})
        if "regime" in data:
            data["regime"] = self.regime.value
        for name, values in self.sweep.items():
            data[f"{SWEEP_PREFIX}{name}"] = list(values)
        return data


def parse_assignment(text: str, line_number: Optional[int] = None) -> Tuple[str, str]:
    """Split ``key = value`` into stripped parts.

    Raises:
        ConfigError: If the text is not an assignment
    """
    where = f" on line {line_number}" if line_number is not None else ""
    if "=" not in text:
        raise ConfigError(f"expected 'key = value'{where}, got {text.strip()!r}")
    key, value = text.split("=", 1)
    key, value = key.strip(), value.strip()
    if not key or not value:
        raise ConfigError(f"empty key or value{where}: {text.strip()!r}")
    return key, value


def parse_config_text(text: str) -> Dict[str, str]:
    """Assignments of a config file in order; a repeated key keeps its last value."""
    entries: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, value = parse_assignment(line, number)
        entries[key] = value
    return entries


def _split_sweeps(entries: Dict[str, str]) -> Dict[str, Any]:
    data: Dict[str, Any] = {}
    sweep: Dict[str, List[float]] = {}
    for key, value in entries.items():
        if key.startswith(SWEEP_PREFIX):
            name = key[len(SWEEP_PREFIX) :]
            if name not in CONFIG_KEYS or name in ("regime", "seed"):
                raise ConfigError(f"cannot sweep over {name!r}")
            try:
                sweep[name] = [float(part) for part in value.split(",") if part.strip()]
            except ValueError as e:
                raise ConfigError(f"bad sweep values for {name!r}: {value!r}") from e
            if not sweep[name]:
                raise ConfigError(f"sweep {name!r} has no values")
        else:
            data[key] = value
    if sweep:
        data["sweep"] = sweep
    return data


def build_config(entries: Dict[str, Any]) -> RunConfig:
    """Validate raw assignments into a RunConfig.

    Raises:
        ConfigError: On unknown keys or invalid values
    """
    data = _split_sweeps({key: value for key, value in entries.items() if value is not None})
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}"
            for error in e.errors()
        )
        raise ConfigError(f"invalid configuration: {problems}") from e


def load_config(
    path: Optional[Path] = None,
    overrides: Iterable[str] = (),
    flags: Optional[Dict[str, Any]] = None,
) -> RunConfig:
    """Read a config file, then apply ``--set`` overrides, then direct flags.

    Later sources win, and within ``overrides`` the last assignment of a key
    wins.

    Args:
        path: Config file (optional)
        overrides: ``key=value`` strings
        flags: Direct flag values keyed by config key; None values are ignored

    Returns:
        RunConfig

    Raises:
        ConfigError: If the file is missing or any entry is invalid
    """
    entries: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        entries.update(parse_config_text(path.read_text(encoding="utf-8")))
        logger.info(f"Loaded {len(entries)} keys from {path}")
    for override in overrides:
        key, value = parse_assignment(override)
        entries[key] = value
    for key, value in (flags or {}).items():
        if value is not None:
            entries[key] = value
    return build_config(entries)


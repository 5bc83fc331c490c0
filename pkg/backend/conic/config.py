"""Environment-driven settings.

An optional ``.env`` next to the backend project is loaded first, the same
way the API entrypoint did it before, then ``CONIC_*`` variables are read.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Mapping

from dotenv import load_dotenv

from .constants import (
    DEFAULT_RHO_CAP,
    DEFAULT_RHO_SWITCH,
    DEFAULT_SERIES_TOL,
    MIN_WIDE_DIGITS,
    RHO_SWITCH_RANGE,
    WIDE_DIGITS,
    WIDE_RHO_SWITCH,
)
from .errors import ConfigError

ENV_PATH = Path(__file__).parent.parent / ".env"

_TRUE = frozenset({"1", "true", "yes", "on"})
_FALSE = frozenset({"", "0", "false", "no", "off"})


def _default_switch(wide: bool) -> float:
    return WIDE_RHO_SWITCH if wide else DEFAULT_RHO_SWITCH


@dataclass(frozen=True, slots=True)
class Settings:
    """Immutable configuration snapshot."""

    wide: bool = False
    wide_digits: int = WIDE_DIGITS
    rho_switch: float = DEFAULT_RHO_SWITCH
    series_tol: float = DEFAULT_SERIES_TOL
    log_level: str = "WARNING"
    rho_cap: float = DEFAULT_RHO_CAP
    rho_switch_pinned: bool = False

    def __post_init__(self) -> None:
        lo, hi = RHO_SWITCH_RANGE
        if not lo <= self.rho_switch <= hi:
            raise ConfigError(f"rho_switch must lie in [{lo}, {hi}], got {self.rho_switch}")
        if self.wide_digits < MIN_WIDE_DIGITS:
            raise ConfigError(f"wide_digits must be >= {MIN_WIDE_DIGITS}, got {self.wide_digits}")
        if not 0.0 < self.series_tol < 1e-6:
            raise ConfigError(f"series_tol must lie in (0, 1e-6), got {self.series_tol}")
        if self.rho_cap <= self.rho_switch:
            raise ConfigError("rho_cap must exceed rho_switch")

    def replace(self, **changes: Any) -> "Settings":
        """Copy with ``changes``; toggling ``wide`` moves an unpinned switch point to the new mode's default."""
        data = asdict(self)
        data.update(changes)
        if "rho_switch" in changes:
            data["rho_switch_pinned"] = True
        elif "wide" in changes and not self.rho_switch_pinned:
            if self.rho_switch == _default_switch(self.wide):
                data["rho_switch"] = _default_switch(bool(changes["wide"]))
        return Settings(**data)

    def as_dict(self) -> dict[str, Any]:
        return {
            "wide": self.wide,
            "wideDigits": self.wide_digits,
            "rhoSwitch": self.rho_switch,
            "seriesTol": self.series_tol,
            "logLevel": self.log_level,
            "rhoCap": self.rho_cap,
        }


def _flag(env: Mapping[str, str], name: str) -> bool:
    raw = env.get(name, "").strip().lower()
    if raw in _TRUE:
        return True
    if raw in _FALSE:
        return False
    raise ConfigError(f"{name} must be a boolean flag, got {raw!r}")


def _number(env: Mapping[str, str], name: str, default: float, kind: type = float) -> Any:
    raw = env.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} is not a valid {kind.__name__}: {raw!r}") from exc


def load_settings(env: Mapping[str, str] | None = None) -> Settings:
    """Build settings from ``env`` (defaults to ``os.environ``)."""
    if env is None:
        load_dotenv(dotenv_path=ENV_PATH)
        env = os.environ
    wide = _flag(env, "CONIC_WIDE")
    return Settings(
        wide=wide,
        wide_digits=_number(env, "CONIC_WIDE_DIGITS", WIDE_DIGITS, int),
        rho_switch=_number(env, "CONIC_RHO_SWITCH", _default_switch(wide)),
        rho_switch_pinned=bool(env.get("CONIC_RHO_SWITCH", "").strip()),
        series_tol=_number(env, "CONIC_SERIES_TOL", DEFAULT_SERIES_TOL),
        log_level=env.get("CONIC_LOG_LEVEL", "WARNING").upper() or "WARNING",
        rho_cap=_number(env, "CONIC_RHO_CAP", DEFAULT_RHO_CAP),
    )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Process-wide settings; ``get_settings.cache_clear()`` re-reads the environment."""
    return load_settings()

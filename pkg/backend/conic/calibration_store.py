"""In-memory store for calibrated far-field parameters."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Dict, List

if TYPE_CHECKING:
    from .conic_core import ConicParams


@dataclass(frozen=True, slots=True)
class CalibrationKey:
    """Everything a calibration depends on."""

    numerator: int
    tol: float
    rho_switch: float
    wide: bool
    digits: int

    def as_dict(self) -> dict[str, object]:
        return {
            "m": f"{self.numerator}/2",
            "tol": self.tol,
            "rhoSwitch": self.rho_switch,
            "wide": self.wide,
            "digits": self.digits,
        }


class CalibrationStore:
    """Thread-safe helper that keeps one ConicParams per key, in creation order.

    Builds run outside the store lock, each behind its own key lock, so a slow
    wide calibration only holds back callers asking for the same key.
    """

    def __init__(self) -> None:
        self._entries: Dict[CalibrationKey, ConicParams] = {}
        self._order: List[CalibrationKey] = []
        self._building: Dict[CalibrationKey, threading.Lock] = {}
        self._lock = threading.RLock()

    def get_or_create(
        self,
        key: CalibrationKey,
        factory: Callable[[], ConicParams],
    ) -> ConicParams:
        """Return the cached entry for ``key``, building it on first use."""
        with self._lock:
            params = self._entries.get(key)
            if params is not None:
                return params
            guard = self._building.setdefault(key, threading.Lock())

        with guard:
            with self._lock:
                params = self._entries.get(key)
            if params is not None:
                return params
            params = factory()
            with self._lock:
                self._entries[key] = params
                self._order.append(key)
                self._building.pop(key, None)
            return params

    def get(self, key: CalibrationKey) -> ConicParams | None:
        with self._lock:
            return self._entries.get(key)

    def list_all(self) -> List[ConicParams]:
        """Return all calibrations in insertion order."""
        with self._lock:
            return [self._entries[key] for key in self._order]

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self._order.clear()


calibration_store = CalibrationStore()
"""Global instance used by conic_core and the API."""

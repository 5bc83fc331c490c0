"""Numeric defaults and process conventions for conic-crossing."""

from __future__ import annotations

import math
from typing import Final

DEFAULT_SERIES_TOL: Final[float] = 1e-14
MAX_SERIES_TERMS: Final[int] = 500

# Series branch of F_c hands over to the far-field form here.
DEFAULT_RHO_SWITCH: Final[float] = 7.0
WIDE_RHO_SWITCH: Final[float] = 9.0
RHO_SWITCH_RANGE: Final[tuple[float, float]] = (4.0, 9.0)

WIDE_DIGITS: Final[int] = 30
MIN_WIDE_DIGITS: Final[int] = 25
DOUBLE_DIGITS: Final[float] = 15.6
MIN_MARGIN_DIGITS: Final[float] = 6.0

FIT_SAMPLES: Final[int] = 64
FIT_WINDOW: Final[float] = 2.0
OVERLAP_WINDOW: Final[float] = 1.0
OVERLAP_TOLERANCE: Final[float] = 1e-6
OVERLAP_FAILURE: Final[float] = 1e-4
MAX_CONDITION: Final[float] = 1e8
MAX_ASYMPTOTIC_TERMS: Final[int] = 60

SEED_RHO: Final[float] = 1e-3
MAX_PROPAGATION_RHO: Final[float] = 10.0

DEFAULT_G_TOL: Final[float] = 1e-6
G_TOL_RANGE: Final[tuple[float, float]] = (1e-10, 1e-2)
DEFAULT_RHO_CAP: Final[float] = 1000.0
TAIL_SAFETY: Final[float] = 1.5

MATCHING_MARGIN: Final[float] = 2.0
MATCHING_R_MAX: Final[float] = 0.1

FIGURE_POINTS: Final[int] = 1000
FIGURE_RHO_MAX: Final[float] = 10.0
FIGURE_ASYMPTOTE_MIN: Final[float] = 0.5
PRINT_DIGITS: Final[int] = 10

SQRT_PI_OVER_3: Final[float] = math.sqrt(math.pi / 3.0)

EXIT_OK: Final[int] = 0
EXIT_IO: Final[int] = 1
EXIT_PARSE: Final[int] = 2
EXIT_DOMAIN: Final[int] = 3
EXIT_PRECISION: Final[int] = 4
EXIT_CONSISTENCY: Final[int] = 5

"""Wave function ℱ_c(m; ρ) at an isotropic conical intersection, and its Zeeman factors."""

__version__ = "0.1.0"

from .conic_core import ConicParams, coeff_A, conic_fc, conic_fc_grid, conic_params, wavefunction
from .domain import AzimuthalNumber, Spinor2
from .errors import (
    ConfigError,
    ConicError,
    ConsistencyError,
    DomainError,
    ParseError,
    PrecisionError,
)
from .zeeman import ZeemanParams, electronic_period, g_factor, zeeman_splitting

__all__ = [
    "AzimuthalNumber",
    "ConfigError",
    "ConicError",
    "ConicParams",
    "ConsistencyError",
    "DomainError",
    "ParseError",
    "PrecisionError",
    "Spinor2",
    "ZeemanParams",
    "__version__",
    "coeff_A",
    "conic_fc",
    "conic_fc_grid",
    "conic_params",
    "electronic_period",
    "g_factor",
    "wavefunction",
    "zeeman_splitting",
]

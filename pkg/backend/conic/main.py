"""FastAPI entrypoint for the conic library."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

env_path = Path(__file__).parent.parent / ".env"
load_dotenv(dotenv_path=env_path)

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from pydantic import ValidationError
from starlette.responses import JSONResponse

from . import __version__
from .calibration_store import calibration_store
from .config import get_settings
from .conic_core import conic_fc_grid
from .constants import DEFAULT_G_TOL
from .domain import AzimuthalNumber
from .errors import ConicError, DomainError
from .output import OutputRecord, Schema
from .potential import parse_potential
from .zeeman import DEFAULT_TE_TOL, ZeemanParams, electronic_period, g_factor, zeeman_splitting

logger = logging.getLogger(__name__)

MAX_STEPS = 10_000

app = FastAPI(title="Conic API", version=__version__)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(ConicError)
async def conic_error_handler(request: Request, exc: ConicError) -> JSONResponse:
    logger.info("%s %s failed: %s", request.method, request.url.path, exc)
    return JSONResponse(status_code=exc.http_status, content={"error": str(exc), "kind": exc.kind})


@app.get("/health")
async def health_check() -> dict[str, Any]:
    return {"status": "healthy", "settings": get_settings().as_dict()}


@app.get("/fc")
def evaluate_fc(
    m: str,
    rho_min: float = 0.0,
    rho_max: float = 10.0,
    steps: int = Query(101, ge=2, le=MAX_STEPS),
) -> dict[str, Any]:
    azimuthal = AzimuthalNumber.parse(m)
    if not 0.0 <= rho_min < rho_max:
        raise DomainError(f"need 0 <= rho_min < rho_max, got {rho_min:g}, {rho_max:g}")
    step = (rho_max - rho_min) / (steps - 1)
    rho = [rho_min + i * step for i in range(steps - 1)] + [rho_max]
    phi1, phi2 = conic_fc_grid(azimuthal, rho)
    record = OutputRecord(Schema.FC)
    for r, a, b in zip(rho, phi1, phi2):
        record.add(rho=float(r), phi1=float(a), phi2=float(b))
    return {"m": str(azimuthal), "rows": record.as_dicts()}


@app.get("/g")
def compute_g(m: str, tol: float = DEFAULT_G_TOL) -> dict[str, Any]:
    result = g_factor(AzimuthalNumber.parse(m), tol)
    return {"g": result.as_dict()}


@app.get("/te")
def compute_te(potential: str, tol: float = DEFAULT_TE_TOL) -> dict[str, Any]:
    curve = parse_potential(potential)
    record = OutputRecord(Schema.TE)
    record.add(potential=curve.label, t_e=electronic_period(curve, tol))
    return {"curve": curve.as_dict(), "rows": record.as_dicts()}


@app.get("/zeeman")
def compute_zeeman(
    m: str,
    M: float,
    B: float,
    te: float,
    g: float | None = None,
) -> dict[str, Any]:
    azimuthal = AzimuthalNumber.parse(m)
    try:
        params = ZeemanParams(mass_ratio=M, field_b=B, t_e=te)
    except ValidationError as exc:
        raise DomainError(f"invalid Zeeman parameters: {exc.errors()[0]['msg']}") from exc
    if g is None:
        g = g_factor(azimuthal).value
    record = OutputRecord(Schema.ZEEMAN)
    record.add(
        m=str(azimuthal),
        M=params.mass_ratio,
        B=params.field_b,
        T_e=params.t_e,
        delta_E=zeeman_splitting(azimuthal, params, g),
    )
    return {"rows": record.as_dicts()}


@app.get("/calibrations")
async def list_calibrations() -> dict[str, Any]:
    return {"calibrations": [params.as_dict() for params in calibration_store.list_all()]}

"""
Command-line interface for conic.

Usage:
    conic eval --m 1/2 --rho-min 0 --rho-max 10 --steps 5
    conic figure --m 1/2 --out fig1.csv
    conic g --m 3/2 --tol 1e-6
    conic te --potential "parabolic-cone:a=1"
    conic zeeman --m 1/2 --M 1e6 --B 1 --te 3.14159
    conic check
"""

from __future__ import annotations

import functools
import logging
import sys
from pathlib import Path
from typing import Any, Callable

import click
import numpy as np
from pydantic import ValidationError

from . import __version__
from .asymptotics import leading_asymptote_values
from .checks import run_checks
from .config import Settings, get_settings
from .conic_core import conic_fc_grid
from .constants import (
    EXIT_CONSISTENCY,
    EXIT_DOMAIN,
    FIGURE_ASYMPTOTE_MIN,
    FIGURE_POINTS,
    FIGURE_RHO_MAX,
)
from .domain import AzimuthalNumber
from .errors import ConicError, DomainError, OutputError
from .output import OutputFormat, OutputRecord, Schema
from .potential import parse_potential
from .zeeman import DEFAULT_TE_TOL, ZeemanParams, electronic_period, g_factor, zeeman_splitting

__all__ = [
    "cli",
]

logger = logging.getLogger(__name__)

FORMAT_CHOICE = click.Choice([f.value for f in OutputFormat])


def _reports_errors(command: Callable[..., Any]) -> Callable[..., Any]:
    """Turn library errors into a one-line message and the error's exit code."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return command(*args, **kwargs)
        except ConicError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(exc.exit_code)
        except ValidationError as exc:
            first = exc.errors()[0]
            field = ".".join(str(part) for part in first["loc"])
            click.echo(f"error: {field}: {first['msg']}", err=True)
            sys.exit(EXIT_DOMAIN)

    return wrapper


def _settings(ctx: click.Context) -> Settings:
    return ctx.obj["settings"]


def _emit(record: OutputRecord, fmt: str) -> None:
    click.echo(record.render(fmt), nl=False)


@click.group()
@click.version_option(version=__version__, prog_name="conic")
@click.option("--wide/--no-wide", default=None, help="Sum series in the wide accumulator (overrides CONIC_WIDE).")
@click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG level on stderr.")
@click.pass_context
@_reports_errors
def cli(ctx: click.Context, wide: bool | None, verbose: bool) -> None:
    """
    Conical-intersection wave function F_c(m; rho) and its Zeeman factors.

    m is always given as a half-odd integer, e.g. 1/2, -3/2, 5/2.
    """
    settings = get_settings()
    if wide is not None:
        settings = settings.replace(wide=wide)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else getattr(logging, settings.log_level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )
    logger.debug("settings: %s", settings.as_dict())
    ctx.ensure_object(dict)
    ctx.obj["settings"] = settings


@cli.command("eval")
@click.option("--m", "m_text", required=True, help="Azimuthal number, e.g. 1/2.")
@click.option("--rho-min", type=float, default=0.0, show_default=True)
@click.option("--rho-max", type=float, default=10.0, show_default=True)
@click.option("--steps", type=int, default=101, show_default=True, help="Number of grid points.")
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="csv", show_default=True)
@click.pass_context
@_reports_errors
def eval_cmd(ctx: click.Context, m_text: str, rho_min: float, rho_max: float, steps: int, fmt: str) -> None:
    """
    Evaluate F_c on a uniform rho grid.

    Examples:

        conic eval --m 1/2 --rho-min 0 --rho-max 10 --steps 5

        conic eval --m -3/2 --steps 50 --format json
    """
    m = AzimuthalNumber.parse(m_text)
    if not 0.0 <= rho_min < rho_max:
        raise DomainError(f"need 0 <= rho_min < rho_max, got {rho_min:g}, {rho_max:g}")
    if steps < 2:
        raise DomainError(f"steps must be >= 2, got {steps}")
    rho = np.linspace(rho_min, rho_max, steps)
    phi1, phi2 = conic_fc_grid(m, rho, settings=_settings(ctx))
    record = OutputRecord(Schema.FC)
    for r, a, b in zip(rho, phi1, phi2):
        record.add(rho=float(r), phi1=float(a), phi2=float(b))
    _emit(record, fmt)


@cli.command()
@click.option("--m", "m_text", required=True, help="Azimuthal number, e.g. 1/2.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.pass_context
@_reports_errors
def figure(ctx: click.Context, m_text: str, out_path: Path) -> None:
    """
    Write F_c and its leading asymptote on rho in [0, 10] as CSV.

    The asym columns are left empty below rho = 0.5.
    """
    m = AzimuthalNumber.parse(m_text)
    rho = np.linspace(0.0, FIGURE_RHO_MAX, FIGURE_POINTS)
    phi1, phi2 = conic_fc_grid(m, rho, settings=_settings(ctx))
    shown = rho >= FIGURE_ASYMPTOTE_MIN
    asym1 = np.full_like(rho, np.nan)
    asym2 = np.full_like(rho, np.nan)
    asym1[shown], asym2[shown] = leading_asymptote_values(m, rho[shown])

    record = OutputRecord(Schema.FIGURE)
    for i, r in enumerate(rho):
        record.add(
            rho=float(r),
            phi1=float(phi1[i]),
            phi2=float(phi2[i]),
            asym1=float(asym1[i]) if shown[i] else None,
            asym2=float(asym2[i]) if shown[i] else None,
        )
    try:
        out_path.write_text(record.to_csv(), encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {out_path}: {exc.strerror or exc}") from exc
    logger.info("wrote %d rows to %s", len(record.rows), out_path)


@cli.command("g")
@click.option("--m", "m_text", required=True, help="Azimuthal number, e.g. 1/2.")
@click.option("--tol", type=float, default=1e-6, show_default=True, help="Absolute error budget.")
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="csv", show_default=True)
@click.pass_context
@_reports_errors
def g_cmd(ctx: click.Context, m_text: str, tol: float, fmt: str) -> None:
    """
    Zeeman factor g(m) with its quadrature error and tail bound.

    Examples:

        conic g --m 1/2

        conic g --m -5/2 --tol 1e-8 --format json
    """
    m = AzimuthalNumber.parse(m_text)
    result = g_factor(m, tol, settings=_settings(ctx))
    record = OutputRecord(Schema.G)
    record.add(
        m=str(m),
        value=result.value,
        error=result.quadrature_error,
        tail_bound=result.tail_bound,
        rho_max=result.rho_max,
    )
    _emit(record, fmt)


@cli.command("te")
@click.option("--potential", "potential_spec", required=True,
              help='"parabolic-cone:a=<a>", "vee:depth=<d>,width=<w>" or "file:<path>".')
@click.option("--tol", type=float, default=DEFAULT_TE_TOL, show_default=True, help="Relative tolerance.")
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="csv", show_default=True)
@_reports_errors
def te_cmd(potential_spec: str, tol: float, fmt: str) -> None:
    """
    Electronic period T_e across the lower sheet E1(r).

    Examples:

        conic te --potential "parabolic-cone:a=1"

        conic te --potential "file:e1.dat"
    """
    curve = parse_potential(potential_spec)
    record = OutputRecord(Schema.TE)
    record.add(potential=curve.label, t_e=electronic_period(curve, tol))
    _emit(record, fmt)


@cli.command()
@click.option("--m", "m_text", required=True, help="Azimuthal number, e.g. 1/2.")
@click.option("--M", "mass_ratio", type=float, required=True, help="Nuclear to electron mass ratio.")
@click.option("--B", "field_b", type=float, required=True, help="Gap parameter B (atomic units).")
@click.option("--te", "t_e", type=float, required=True, help="Electronic period T_e.")
@click.option("--g", "g_value", type=float, default=None, help="Use this g(m) instead of computing it.")
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="csv", show_default=True)
@click.pass_context
@_reports_errors
def zeeman(
    ctx: click.Context,
    m_text: str,
    mass_ratio: float,
    field_b: float,
    t_e: float,
    g_value: float | None,
    fmt: str,
) -> None:
    """
    Anomalous Zeeman splitting M^(-1/6) g(m) B / T_e.

    Example:

        conic zeeman --m 1/2 --M 1e6 --B 1 --te 3.14159
    """
    m = AzimuthalNumber.parse(m_text)
    params = ZeemanParams(mass_ratio=mass_ratio, field_b=field_b, t_e=t_e)
    if g_value is None:
        g_value = g_factor(m, settings=_settings(ctx)).value
    record = OutputRecord(Schema.ZEEMAN)
    record.add(
        m=str(m),
        M=params.mass_ratio,
        B=params.field_b,
        T_e=params.t_e,
        delta_E=zeeman_splitting(m, params, g_value),
    )
    _emit(record, fmt)


@cli.command()
@click.pass_context
@_reports_errors
def check(ctx: click.Context) -> None:
    """Run the self-check suite; exit status 5 if any check fails."""
    results = run_checks(_settings(ctx))
    for result in results:
        click.echo(result.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        click.echo(f"{len(failed)} of {len(results)} checks failed", err=True)
        sys.exit(EXIT_CONSISTENCY)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """
    Serve the HTTP API under uvicorn.

    The server reads its settings from the environment (CONIC_*), not from
    the --wide flag.
    """
    import uvicorn

    uvicorn.run("conic.main:app", host=host, port=port)


if __name__ == "__main__":
    cli()

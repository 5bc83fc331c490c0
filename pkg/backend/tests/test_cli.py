import csv
import json
import math

import pytest
from click.testing import CliRunner

from conic.cli import cli
from conic.constants import EXIT_DOMAIN, EXIT_IO, EXIT_PARSE, EXIT_PRECISION


@pytest.fixture
def runner():
    return CliRunner()


def test_eval_csv(runner):
    result = runner.invoke(cli, ["eval", "--m", "1/2", "--rho-min", "0", "--rho-max", "10", "--steps", "5", "--format", "csv"])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == "rho,phi1,phi2"
    assert len(lines) == 6
    assert lines[1] == "0,1.023326708,0"


def test_eval_negative_m_swaps_components(runner):
    result = runner.invoke(cli, ["eval", "--m", "-1/2", "--rho-max", "1", "--steps", "2"])
    assert result.exit_code == 0, result.output
    assert result.output.splitlines()[1] == "0,0,1.023326708"


def test_eval_json(runner):
    result = runner.invoke(cli, ["eval", "--m", "3/2", "--rho-max", "4", "--steps", "3", "--format", "json"])
    assert result.exit_code == 0, result.output
    rows = json.loads(result.output)
    assert [row["rho"] for row in rows] == [0.0, 2.0, 4.0]
    assert rows[0] == {"rho": 0.0, "phi1": 0.0, "phi2": 0.0}


def test_eval_is_deterministic(runner):
    args = ["eval", "--m", "5/2", "--rho-max", "9", "--steps", "7"]
    assert runner.invoke(cli, args).output == runner.invoke(cli, args).output


def test_integer_m_is_a_parse_error(runner):
    result = runner.invoke(cli, ["eval", "--m", "2"])
    assert result.exit_code == EXIT_PARSE
    assert "half-odd" in result.output


def test_bad_grid_is_a_domain_error(runner):
    result = runner.invoke(cli, ["eval", "--m", "1/2", "--rho-min", "3", "--rho-max", "1"])
    assert result.exit_code == EXIT_DOMAIN


def test_precision_error_exit_code(runner, monkeypatch):
    monkeypatch.setenv("CONIC_RHO_SWITCH", "9")
    monkeypatch.setenv("CONIC_SERIES_TOL", "1e-10")
    result = runner.invoke(cli, ["eval", "--m", "1/2", "--rho-min", "8", "--rho-max", "8.5", "--steps", "2"])
    assert result.exit_code == EXIT_PRECISION


def test_figure(runner, tmp_path):
    out = tmp_path / "fig1.csv"
    result = runner.invoke(cli, ["figure", "--m", "1/2", "--out", str(out)])
    assert result.exit_code == 0, result.output
    with out.open() as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 1000
    assert rows[0]["asym1"] == ""
    for row in rows:
        rho = float(row["rho"])
        if rho < 6.0:
            continue
        envelope = rho**-0.75
        phi1, phi2 = float(row["phi1"]), float(row["phi2"])
        assert abs(phi1 - float(row["asym1"])) < 0.02 * envelope
        if rho >= 8.0:
            assert abs(phi1 + phi2) < 0.05 * envelope


def test_figure_vanishes_at_origin_for_higher_m(runner, tmp_path):
    out = tmp_path / "fig.csv"
    assert runner.invoke(cli, ["figure", "--m", "3/2", "--out", str(out)]).exit_code == 0
    first = out.read_text().splitlines()[1].split(",")
    assert first[1:3] == ["0", "0"]


def test_figure_unwritable(runner, tmp_path):
    result = runner.invoke(cli, ["figure", "--m", "1/2", "--out", str(tmp_path / "missing" / "fig.csv")])
    assert result.exit_code == EXIT_IO
    assert "error: cannot write" in result.output
    assert "Traceback" not in result.output


def test_g(runner):
    result = runner.invoke(cli, ["g", "--m", "1/2"])
    assert result.exit_code == 0, result.output
    header, row = result.output.splitlines()
    assert header == "m,value,error,tail_bound,rho_max"
    values = row.split(",")
    assert values[0] == "1/2"
    assert float(values[1]) == pytest.approx(0.961, abs=0.002)


def test_te(runner):
    result = runner.invoke(cli, ["te", "--potential", "parabolic-cone:a=1"])
    assert result.exit_code == 0, result.output
    assert result.output.splitlines()[1] == "parabolic-cone:a=1,3.141592654"


def test_te_bad_spec(runner):
    assert runner.invoke(cli, ["te", "--potential", "sphere:r=1"]).exit_code == EXIT_PARSE


def test_zeeman(runner):
    result = runner.invoke(
        cli, ["zeeman", "--m", "1/2", "--M", "1e6", "--B", "1", "--te", "1", "--g", "0.961", "--format", "json"]
    )
    assert result.exit_code == 0, result.output
    (row,) = json.loads(result.output)
    assert row["delta_E"] == pytest.approx(0.0961, rel=1e-9)
    assert row["M"] == 1e6


def test_zeeman_rejects_negative_field(runner):
    result = runner.invoke(cli, ["zeeman", "--m", "1/2", "--M", "1e6", "--B", "-1", "--te", "1", "--g", "1"])
    assert result.exit_code == EXIT_DOMAIN


def test_zeeman_divides_by_period(runner):
    result = runner.invoke(
        cli, ["zeeman", "--m", "1/2", "--M", "1e6", "--B", "1", "--te", str(math.pi), "--g", "0.961"]
    )
    assert float(result.output.splitlines()[1].split(",")[4]) == pytest.approx(0.0961 / math.pi, rel=1e-9)


@pytest.mark.slow
def test_check_suite_passes(runner):
    result = runner.invoke(cli, ["check"])
    assert result.exit_code == 0, result.output
    lines = [line for line in result.output.splitlines() if line.startswith(("PASS", "FAIL"))]
    assert len(lines) == 11
    assert all(line.startswith("PASS") for line in lines)

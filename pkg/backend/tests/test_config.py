import pytest

from conic.config import Settings, get_settings, load_settings
from conic.constants import DEFAULT_RHO_SWITCH
from conic.errors import ConfigError


def test_defaults():
    settings = load_settings({})
    assert settings == Settings()
    assert settings.rho_switch == DEFAULT_RHO_SWITCH == 7.0
    assert settings.series_tol == 1e-14
    assert not settings.wide


def test_wide_moves_the_switch_point():
    assert load_settings({"CONIC_WIDE": "1"}).rho_switch == 9.0
    assert load_settings({"CONIC_WIDE": "true", "CONIC_RHO_SWITCH": "8"}).rho_switch == 8.0
    assert Settings().replace(wide=True).rho_switch == 9.0


def test_turning_wide_off_restores_the_double_switch_point():
    wide = load_settings({"CONIC_WIDE": "1"})
    assert wide.replace(wide=False).rho_switch == DEFAULT_RHO_SWITCH
    assert Settings().replace(wide=True).replace(wide=False).rho_switch == DEFAULT_RHO_SWITCH


def test_pinned_switch_point_survives_wide_toggle():
    pinned = load_settings({"CONIC_WIDE": "1", "CONIC_RHO_SWITCH": "9"})
    assert pinned.replace(wide=False).rho_switch == 9.0
    assert Settings().replace(rho_switch=5.0).replace(wide=True).rho_switch == 5.0
    assert Settings(rho_switch=5.0).replace(wide=True).rho_switch == 5.0


@pytest.mark.parametrize(
    "env",
    [
        {"CONIC_WIDE": "maybe"},
        {"CONIC_RHO_SWITCH": "12"},
        {"CONIC_RHO_SWITCH": "six"},
        {"CONIC_WIDE_DIGITS": "16"},
        {"CONIC_SERIES_TOL": "1e-3"},
    ],
)
def test_invalid_environment(env):
    with pytest.raises(ConfigError):
        load_settings(env)


def test_get_settings_reads_environment(monkeypatch):
    monkeypatch.setenv("CONIC_LOG_LEVEL", "debug")
    monkeypatch.setenv("CONIC_RHO_CAP", "500")
    get_settings.cache_clear()
    settings = get_settings()
    assert settings.log_level == "DEBUG"
    assert settings.rho_cap == 500.0
    assert get_settings() is settings


def test_as_dict():
    assert Settings().as_dict()["rhoSwitch"] == 7.0
    assert "rhoSwitchPinned" not in Settings().as_dict()

"""Shared fixtures: every test starts from default settings."""

from __future__ import annotations

import os

import pytest

from conic.config import get_settings
from conic.domain import AzimuthalNumber


@pytest.fixture(autouse=True)
def default_settings(monkeypatch: pytest.MonkeyPatch):
    for name in list(os.environ):
        if name.startswith("CONIC_"):
            monkeypatch.delenv(name)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def settings():
    return get_settings()


@pytest.fixture(scope="session")
def half():
    return AzimuthalNumber(1)


@pytest.fixture(scope="session")
def test_ms():
    return (AzimuthalNumber(1), AzimuthalNumber(3), AzimuthalNumber(5))

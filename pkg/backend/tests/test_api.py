import pytest
from fastapi.testclient import TestClient

from conic.main import app


@pytest.fixture
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_fc(client):
    response = client.get("/fc", params={"m": "1/2", "rho_min": 0, "rho_max": 8, "steps": 3})
    assert response.status_code == 200
    rows = response.json()["rows"]
    assert [row["rho"] for row in rows] == [0.0, 4.0, 8.0]
    assert rows[0]["phi1"] == pytest.approx(1.023326708)
    calibrations = client.get("/calibrations").json()["calibrations"]
    assert any(entry["m"] == "1/2" for entry in calibrations)


def test_fc_parse_error(client):
    response = client.get("/fc", params={"m": "2"})
    assert response.status_code == 422
    assert response.json()["kind"] == "parse"


def test_te(client):
    response = client.get("/te", params={"potential": "vee:depth=1,width=1"})
    assert response.status_code == 200
    assert response.json()["rows"][0]["t_e"] == pytest.approx(4.0)


def test_zeeman(client):
    response = client.get("/zeeman", params={"m": "1/2", "M": 1e6, "B": 1, "te": 1, "g": 0.961})
    assert response.status_code == 200
    assert response.json()["rows"][0]["delta_E"] == pytest.approx(0.0961)


def test_zeeman_domain_error(client):
    response = client.get("/zeeman", params={"m": "1/2", "M": 1e6, "B": -1, "te": 1, "g": 0.961})
    assert response.status_code == 422
    assert response.json()["kind"] == "domain"


def test_g(client):
    response = client.get("/g", params={"m": "-1/2"})
    assert response.status_code == 200
    assert response.json()["g"]["value"] == pytest.approx(-0.961, abs=0.002)

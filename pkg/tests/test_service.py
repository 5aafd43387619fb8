import math

import pytest
from fastapi.testclient import TestClient

from hypbergman.service import create_app


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


TRIVIAL_PLAN = {
    "model": "trivial",
    "k": [3, 4],
    "base_points": [[0.0, 1.0]],
    "deltas": [0.0, 0.4],
    "count": 2,
    "radius": 8.0,
    "seed": 5,
    "cache": False,
}


def test_health_and_models(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"
    response = client.get("/models")
    assert response.status_code == 200
    by_label = {m["label"]: m for m in response.json()}
    assert set(by_label) == {"trivial", "parabolic", "modular", "bolza", "gamma2"}
    assert by_label["modular"]["injectivity_radius"] == pytest.approx(math.log(4.0))
    assert by_label["gamma2"]["cusp_width"] == 2.0
    assert by_label["bolza"]["kind"] == "compact"


def test_sweep_endpoint(client):
    response = client.post("/sweep", json=TRIVIAL_PLAN)
    assert response.status_code == 200
    data = response.json()
    assert data["row_count"] == 2 * 2 * 2
    assert data["error_rows"] == 0 and data["resource_rows"] == 0
    assert data["min_margin"] > 0
    assert "near" in data["regimes"]
    assert data["csv"].splitlines()[1].startswith("model,k,zx")


def test_sweep_validation(client):
    bad = dict(TRIVIAL_PLAN, k=[2])
    assert client.post("/sweep", json=bad).status_code == 422
    bad = dict(TRIVIAL_PLAN, model="klein")
    assert client.post("/sweep", json=bad).status_code == 422
    bad = dict(TRIVIAL_PLAN, base_points=[[0.0, -1.0]])
    assert client.post("/sweep", json=bad).status_code == 422
    bad = dict(TRIVIAL_PLAN, deltas=[25.0])
    assert client.post("/sweep", json=bad).status_code == 422


def test_verify_endpoint(client):
    sweep = client.post("/sweep", json=TRIVIAL_PLAN).json()
    response = client.post("/verify", json={"sweep_csv": sweep["csv"]})
    assert response.status_code == 200
    data = response.json()
    assert data["passed"] is True and data["exit_code"] == 0
    assert any(line.startswith("regime near") for line in data["report"])
    assert client.post("/verify", json={"sweep_csv": "nonsense"}).status_code == 422


def test_count_endpoint(client):
    response = client.post("/count", json=dict(TRIVIAL_PLAN, k=[3]))
    assert response.status_code == 200
    data = response.json()
    assert data["min_slack"] >= 0
    assert data["csv"].splitlines()[1].startswith("kind,model")


def test_diag_endpoint(client):
    plan = {
        "model": "modular",
        "k": [3, 4],
        "deltas": [0.0],
        "count": 1,
        "radius": 4.0,
        "cache": False,
        "n_samples": 8,
    }
    response = client.post("/diag", json=plan)
    assert response.status_code == 200
    lines = response.json()["csv"].splitlines()
    assert lines[1] == "model,kind,k,sup,envelope,ratio"
    assert len(lines) == 4
    # parabolic model has no diagonal study
    assert client.post("/diag", json=dict(plan, model="parabolic")).status_code == 422


def test_sweep_determinism_over_http(client):
    a = client.post("/sweep", json=TRIVIAL_PLAN).json()["csv"]
    b = client.post("/sweep", json=TRIVIAL_PLAN).json()["csv"]
    assert a == b

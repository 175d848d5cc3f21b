from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from ncbrackets.service import app

FIXDIR = Path("fixtures")


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_healthz(client):
    response = client.get("/healthz")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_check_endpoint_pass(client):
    response = client.post(
        "/v1/check", json={"presentation": FIXDIR.joinpath("hyp.txt").read_text()}
    )
    assert response.status_code == 200
    payload = response.json()
    assert payload["exit_code"] == 0
    assert payload["report"]["summary"]["fail"] == 0


def test_check_endpoint_violations(client):
    response = client.post(
        "/v1/check", json={"presentation": FIXDIR.joinpath("bad.txt").read_text()}
    )
    payload = response.json()
    assert payload["exit_code"] == 1
    failing = [e for e in payload["report"]["entries"] if e["status"] == "fail"]
    assert failing and failing[0]["check_id"] == "CD.c"
    assert failing[0]["witness"] == "(x,x)"


def test_parse_error_reported(client):
    response = client.post("/v1/check", json={"presentation": "[generators]\nq : Q\n"})
    payload = response.json()
    assert payload["exit_code"] == 2
    assert payload["error"]


def test_convert_endpoint(client):
    response = client.post(
        "/v1/convert", json={"presentation": FIXDIR.joinpath("hyp.txt").read_text()}
    )
    payload = response.json()
    assert payload["exit_code"] == 0
    assert "kind = dpva" in payload["presentation"]
    # feed the converted presentation back through check
    second = client.post("/v1/check", json={"presentation": payload["presentation"]})
    assert second.json()["exit_code"] == 0


def test_rep_endpoint(client):
    response = client.post(
        "/v1/rep",
        json={"presentation": FIXDIR.joinpath("linear_poisson.txt").read_text(), "n": 2},
    )
    payload = response.json()
    assert payload["exit_code"] == 0
    assert payload["induced"]["N"] == 2
    assert payload["induced"]["poisson"]


def test_appendix_endpoint(client):
    response = client.post(
        "/v1/appendix", json={"presentation": FIXDIR.joinpath("hyp.txt").read_text()}
    )
    assert response.json()["exit_code"] == 0


def test_seeded_requests_are_deterministic(client):
    body = {"presentation": FIXDIR.joinpath("hyp.txt").read_text(), "seed": 9}
    first = client.post("/v1/check", json=body).json()
    second = client.post("/v1/check", json=body).json()
    assert first == second

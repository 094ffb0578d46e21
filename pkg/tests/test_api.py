import pytest
from fastapi.testclient import TestClient

from main import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_index(client):
    response = client.get("/")
    assert response.status_code == 200
    assert "/check" in response.json()["endpoints"]


def test_registries(client):
    families = client.get("/systems").json()
    assert families["families"] == ["A", "B", "C", "D", "E", "F", "G"]
    suites = client.get("/suites").json()
    assert "parameters" in suites["suites"]


def test_roots(client):
    response = client.get("/roots", params={"system": "G2", "alpha": "[1,0]"})
    assert response.status_code == 200
    body = response.json()
    assert body["schema"] == 1
    assert len(body["b_set"]) == 5 and body["covered"]


def test_roots_bad_literal(client):
    response = client.get("/roots", params={"system": "G2", "alpha": "[9,9]"})
    assert response.status_code == 400


def test_check(client):
    response = client.post("/check", json={"system": "A2", "ring": "gf:2", "suites": ["deletion", "sl2"]})
    assert response.status_code == 200
    body = response.json()
    assert body["passed"]
    assert [s["suite"] for s in body["suites"]] == ["deletion", "sl2"]


def test_check_validation(client):
    assert client.post("/check", json={"system": "A1", "ring": "gf:2"}).status_code == 422
    assert client.post("/check", json={"system": "A2", "ring": "zmod:6"}).status_code == 422
    assert client.post("/check", json={"system": "A2", "ring": "gf:2", "suites": ["x"]}).status_code == 422


def test_check_missing_unit(client):
    response = client.post("/check", json={"system": "G2", "ring": "zmod:9"})
    assert response.status_code == 400
    assert "1/3" in response.json()["detail"]


def test_decompose(client):
    response = client.post("/decompose", json={"system": "A2", "ring": "gf:3", "word": "x[0,-1](1) * x[1,0](2)"})
    assert response.status_code == 200
    assert response.json()["recomposes"]


def test_decompose_non_unit(client):
    response = client.post("/decompose", json={"system": "A2", "ring": "gf:3", "word": "h[1,0](0)"})
    assert response.status_code == 400


def test_interp(client):
    response = client.post("/interp", json={"system": "A2", "ring": "gf:3", "direction": "ring"})
    assert response.status_code == 200
    assert response.json()["passed"]


def test_interp_capped_group_is_sampled(client):
    response = client.post("/interp", json={"system": "A2", "ring": "gf:3", "direction": "group",
                                            "cap": 50, "pairs": 20})
    assert response.status_code == 200
    body = response.json()
    assert body["passed"] and body["sampled"]
    assert body["checked"] == 20
    assert body["details"]["code_classes"] == 5616


def test_interp_unknown_direction(client):
    response = client.post("/interp", json={"system": "A2", "ring": "gf:3", "direction": "sideways"})
    assert response.status_code == 422

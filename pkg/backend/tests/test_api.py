from fastapi.testclient import TestClient

from main import app

client = TestClient(app)


def test_health():
    assert client.get("/health").json() == {"status": "healthy"}
    assert client.get("/").status_code == 200


def test_factorize_and_verify():
    response = client.post("/words/factorize", json={"n": 3, "word": "t{1,3}"})
    assert response.status_code == 200
    body = response.json()
    assert body["delta_exponents"] == {"1": 1, "2": 1, "3": 1}
    assert body["oracle_verified"] is True
    response = client.post("/words/verify", json={"n": 2, "lhs": "d1 d2", "rhs": "d2 d1"})
    assert response.json()["equal"] is True


def test_bad_word_is_a_client_error():
    response = client.post("/words/factorize", json={"n": 3, "word": "x{"})
    assert response.status_code == 400
    assert "column 1" in response.json()["detail"]


def test_word_model():
    response = client.post("/words/model", json={"n": 3, "word": "t{1,3}"})
    assert response.json()["p"] == [1, 1]


def test_model_routes():
    model = {"n": 2, "p": [1], "q": [1, 1]}
    matrix = client.post("/models/matrix", json=model).json()
    assert matrix["components"][:2] == ["U1", "U2"]
    graph = client.post("/models/graph", json=model).json()
    assert graph["vertices"] == [1, 2, 3]
    consistency = client.post("/models/consistency", json=model).json()
    assert consistency["passed"] is True
    assert consistency["linking_det"] == 3
    cert = client.post("/models/certificate", json=model).json()
    assert cert["verdict"] == "success"
    assert client.post("/models/matrix", json={"n": 2, "p": [0], "q": [1, 1]}).status_code == 400


def test_invariants_route():
    body = client.post("/models/invariants", json={"matrix": [[-1, 0], [0, -1]]}).json()
    assert body["signature"] == -2
    assert body["diagonalizable"] is True


def test_contact_routes():
    body = client.post("/contact/d3", json={"matrix": [[-1]], "rot": [3], "chi_x0": 1}).json()
    assert body["d3"] == "-2"
    assert client.post("/contact/d3", json={"matrix": [[0]], "rot": [1], "chi_x0": 1}).status_code == 400
    report = client.post("/contact/obstruct", json={"rules": {"legendrian_tb0": {"rot": 1}}}).json()
    assert report["obstructed"] is True
    assert client.post("/contact/obstruct", json={"rules": {"legendrian_tb0": {"rot": 2}}}).status_code == 400

"""Tests for the HTTP API."""

import pytest
from fastapi.testclient import TestClient

from recipcas import __version__
from recipcas.api import create_app


@pytest.fixture
def client():
    """Test client over a fresh application."""
    return TestClient(create_app())


class TestExpressions:
    """Test expression endpoints."""

    def test_healthz(self, client):
        """Test the health probe."""
        response = client.get("/healthz")

        assert response.status_code == 200
        assert response.json() == {"status": "ok", "version": __version__}

    def test_eval(self, client):
        """Test normalization of a reciprocal sum."""
        response = client.post("/eval", json={"expr": "recip(X)+recip(Y)"})

        assert response.status_code == 200
        assert response.json() == {"value": "(X + Y)/(X*Y)", "kind": "RationalFunction"}

    def test_sigma(self, client):
        """Test sigma in three variables."""
        response = client.post("/sigma", json={"expr": "X*Y*Z", "n": 3})

        assert response.json()["value"] == "1/(X*Y*Z)"

    def test_star(self, client):
        """Test the star form."""
        response = client.post("/star", json={"expr": "X^2 + Y"})

        assert response.json() == {"fstar": "X^2 + Y", "a": [2, 1], "t": [0, 0]}

    def test_value(self, client):
        """Test a valuation request."""
        response = client.post("/value", json={"expr": "sigma(1/(X+Y))", "spec": "order"})

        assert response.json() == {"spec": "order", "value": 1}

    def test_invert(self, client):
        """Test unit inversion."""
        response = client.post("/invert", json={"expr": "recip(1) + recip(X)"})

        body = response.json()
        assert body["product"] == "1"
        assert body["terms"] == 2

    def test_length(self, client):
        """Test the bounded length search."""
        response = client.post(
            "/length", json={"expr": "1/X", "deg": 1, "height": 1, "terms": 1}
        )

        assert response.json() == {"length": 1}


class TestErrors:
    """Test error responses."""

    def test_syntax_error(self, client):
        """Test a malformed expression."""
        response = client.post("/eval", json={"expr": "X +"})

        assert response.status_code == 400
        body = response.json()
        assert body["error"] == "ExpressionSyntaxError"
        assert body["details"]["position"] == 3

    def test_domain_error(self, client):
        """Test a well-formed request outside an operation's domain."""
        response = client.post("/invert", json={"expr": "recip(X) + recip(Y)"})

        assert response.status_code == 422
        assert response.json()["error"] == "NotAUnitError"

    def test_arity_error(self, client):
        """Test wsub on three variables."""
        response = client.post("/value", json={"expr": "X", "spec": "wsub:2,3,7", "n": 3})

        assert response.status_code == 422
        assert response.json()["error"] == "UnsupportedArityError"

    def test_request_validation(self, client):
        """Test a request missing its expression."""
        response = client.post("/eval", json={})

        assert response.status_code == 422

    def test_request_id_header(self, client):
        """Test that request IDs are echoed."""
        response = client.get("/healthz", headers={"X-Request-ID": "abc-123"})

        assert response.headers["X-Request-ID"] == "abc-123"


class TestCertificates:
    """Test certificate endpoints."""

    def test_list(self, client):
        """Test the certificate listing."""
        response = client.get("/certificates")

        names = [item["name"] for item in response.json()]
        assert len(names) == 15
        assert names == sorted(names)
        beta = next(item for item in response.json() if item["name"] == "beta_integrality")
        assert beta["parameters"] == ["p", "q"]

    def test_run(self, client):
        """Test a certificate with named parameters."""
        response = client.post("/certificates/beta_integrality", json={"params": {"p": 3, "q": 4}})

        assert response.status_code == 200
        body = response.json()
        assert body["passed"] is True
        assert body["parameters"] == {"p": 3, "q": 4}

    def test_run_without_body(self, client):
        """Test that an omitted body means default parameters."""
        response = client.post("/certificates/non_ufd")

        assert response.status_code == 200
        assert response.json()["passed"] is True

    def test_unknown(self, client):
        """Test a missing certificate."""
        response = client.post("/certificates/no_such_certificate", json={})

        assert response.status_code == 404
        assert "beta_integrality" in response.json()["details"]["available"]

    def test_invalid_pair(self, client):
        """Test a non-coprime pair."""
        response = client.post("/certificates/beta_integrality", json={"params": {"p": 2, "q": 4}})

        assert response.status_code == 422
        assert response.json()["error"] == "InvalidPairError"

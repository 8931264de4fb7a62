"""Tests for the FastAPI web service endpoints."""

from unittest.mock import Mock

import pytest

from empasim.core import ClockBudgetExceededError, Simulator
from empasim.main import app

PREFIX = "/api/v1"


class TestMainEndpoints:
    """Tests for main application endpoints."""

    def test_read_root(self, client):
        """Test the root endpoint returns basic API information."""
        response = client.get("/")
        assert response.status_code == 200
        data = response.json()
        assert data["message"] == "empasim API"
        assert data["version"] == "1.0.0"
        assert data["status"] == "running"

    def test_health_check(self, client):
        """Test the health check endpoint."""
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json()["status"] == "healthy"

    def test_lifespan_creates_simulator(self, client):
        """Test the simulator is stored in application state."""
        assert isinstance(app.state.simulator, Simulator)


class TestAssembleEndpoint:
    """Tests for the assemble endpoint."""

    def test_assemble_success(self, client, create_child_source):
        """Test a program assembles to object text with symbols."""
        response = client.post(f"{PREFIX}/programs/assemble", json={"source": create_child_source})
        assert response.status_code == 200
        data = response.json()
        assert data["entry"] == 0
        assert data["symbols"]["Child"] > 0
        assert data["object_text"].startswith("0x0000:")
        assert "QCreate" in data["disassembly"]

    def test_assemble_error(self, client):
        """Test assembly errors map to 400 with the line number."""
        response = client.post(f"{PREFIX}/programs/assemble", json={"source": "jmp Nowhere\n"})
        assert response.status_code == 400
        assert "line 1" in response.json()["detail"]

    def test_assemble_missing_source(self, client):
        """Test request validation."""
        response = client.post(f"{PREFIX}/programs/assemble", json={})
        assert response.status_code == 422


class TestRunEndpoint:
    """Tests for the run endpoint."""

    def test_run_source(self, client, create_child_source):
        """Test running a program given as source."""
        response = client.post(f"{PREFIX}/simulations/run", json={"source": create_child_source})
        assert response.status_code == 200
        data = response.json()
        assert data["registers"]["%ebx"] == 15
        assert data["peak_cores"] == 2
        assert data["trace"] == []

    def test_run_sample_with_trace(self, client):
        """Test a sample run returning its trace."""
        response = client.post(
            f"{PREFIX}/simulations/run",
            json={"mode": "SUMUP", "veclen": 2, "include_trace": True},
        )
        assert response.status_code == 200
        data = response.json()
        assert (data["total_clocks"], data["peak_cores"], data["result"]) == (34, 3, 3)
        assert data["trace"][-1].split("\t")[2] == "END"

    def test_run_sample_values(self, client):
        """Test a sample run on explicit values."""
        response = client.post(f"{PREFIX}/simulations/run", json={"mode": "FOR", "values": [4, 5, 6]})
        assert response.status_code == 200
        assert response.json()["result"] == 15

    @pytest.mark.parametrize("body", [
        {"mode": "SUMUP", "veclen": 11},
        {"mode": "NO", "values": list(range(11))},
    ])
    def test_run_sample_length_limit(self, client, monkeypatch, body):
        """Test sample vectors above the service limit map to 400."""
        monkeypatch.setenv("EMPASIM_SERVICE_MAX_SWEEP_LENGTH", "10")
        response = client.post(f"{PREFIX}/simulations/run", json=body)
        assert response.status_code == 400
        assert "limited to 10" in response.json()["detail"]

    def test_run_sample_at_length_limit(self, client, monkeypatch):
        """Test a vector exactly at the service limit still runs."""
        monkeypatch.setenv("EMPASIM_SERVICE_MAX_SWEEP_LENGTH", "10")
        response = client.post(f"{PREFIX}/simulations/run", json={"mode": "FOR", "veclen": 10})
        assert response.status_code == 200
        assert response.json()["result"] == 55

    def test_run_needs_exactly_one_program(self, client):
        """Test source and mode are mutually exclusive."""
        response = client.post(
            f"{PREFIX}/simulations/run",
            json={"source": "halt\n", "mode": "NO", "veclen": 1},
        )
        assert response.status_code == 422

    def test_mode_needs_vector(self, client):
        """Test a sample run without values or length is rejected."""
        response = client.post(f"{PREFIX}/simulations/run", json={"mode": "NO"})
        assert response.status_code == 422

    def test_assembly_error(self, client):
        """Test a bad program maps to 400."""
        response = client.post(f"{PREFIX}/simulations/run", json={"source": "bogus %eax\n"})
        assert response.status_code == 400

    def test_simulation_fault(self, client):
        """Test a faulting program maps to 422."""
        response = client.post(f"{PREFIX}/simulations/run", json={"source": "rrmovl %pr, %eax\nhalt\n"})
        assert response.status_code == 422
        assert "pseudo-register" in response.json()["detail"]

    def test_deadlock(self, client):
        """Test a deadlocked program maps to 422."""
        response = client.post(
            f"{PREFIX}/simulations/run",
            json={"source": "QCreate Child\nhalt\nChild: QTerm\n", "pool_size": 1},
        )
        assert response.status_code == 422
        assert "deadlock" in response.json()["detail"]

    def test_clock_budget(self, client):
        """Test an exhausted clock budget maps to 422."""
        original = app.state.simulator
        mock_simulator = Mock(wraps=original)
        mock_simulator.run.side_effect = ClockBudgetExceededError("clock budget of 100 clocks exceeded")
        app.state.simulator = mock_simulator
        try:
            response = client.post(f"{PREFIX}/simulations/run", json={"source": "Loop: jmp Loop\n"})
        finally:
            app.state.simulator = original
        assert response.status_code == 422
        assert "clock budget" in response.json()["detail"]

    def test_unexpected_error(self, client):
        """Test unexpected failures map to 500."""
        original = app.state.simulator
        mock_simulator = Mock()
        mock_simulator.load_program.side_effect = RuntimeError("boom")
        app.state.simulator = mock_simulator
        try:
            response = client.post(f"{PREFIX}/simulations/run", json={"source": "halt\n"})
        finally:
            app.state.simulator = original
        assert response.status_code == 500
        assert "boom" in response.json()["detail"]


class TestBenchmarkEndpoints:
    """Tests for the benchmark endpoints."""

    def test_table(self, client):
        """Test the table reproduces the reference values."""
        response = client.get(f"{PREFIX}/benchmarks/table")
        assert response.status_code == 200
        data = response.json()
        assert len(data["rows"]) == 12
        assert data["deltas"] == []
        row = data["rows"][5]
        assert (row["length"], row["mode"], row["clocks"], row["k"]) == (2, "SUMUP", 34, 3)
        assert row["speedup"] == pytest.approx(82 / 34)
        assert row["alpha_eff"] == pytest.approx(1.5 * (1 - 34 / 82))

    def test_sweep(self, client):
        """Test a sweep over a few lengths."""
        response = client.post(f"{PREFIX}/benchmarks/sweep", json={"lengths": [5, 1], "modes": ["FOR"]})
        assert response.status_code == 200
        rows = response.json()["rows"]
        assert [(row["length"], row["clocks"]) for row in rows] == [(1, 31), (5, 75)]

    def test_sweep_length_limit(self, client, monkeypatch):
        """Test lengths above the service limit map to 400."""
        monkeypatch.setenv("EMPASIM_SERVICE_MAX_SWEEP_LENGTH", "10")
        response = client.post(f"{PREFIX}/benchmarks/sweep", json={"lengths": [11]})
        assert response.status_code == 400
        assert "limited to 10" in response.json()["detail"]

    @pytest.mark.parametrize("body", [{"lengths": []}, {"lengths": [0]}, {"lengths": [1], "modes": ["WHILE"]}])
    def test_sweep_validation(self, client, body):
        """Test malformed sweep requests are rejected."""
        response = client.post(f"{PREFIX}/benchmarks/sweep", json=body)
        assert response.status_code == 422

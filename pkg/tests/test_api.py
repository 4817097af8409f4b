import sys
import os

import pytest
from fastapi.testclient import TestClient

# Add src to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from app import app

CORPUS_DIR = os.path.join(os.path.dirname(__file__), '..', 'corpus')

client = TestClient(app)


def _source(name):
    with open(os.path.join(CORPUS_DIR, f"{name}.rpl"), encoding="utf-8") as f:
        return f.read()


def test_health_and_info():
    health = client.get("/health")
    assert health.status_code == 200
    assert health.json()["status"] == "healthy"
    info = client.get("/info").json()
    assert "/exec" in info["endpoints"]
    assert client.get("/").json()["service"] == "ROOPL Toolchain API"


def test_check_returns_diagnostics_instead_of_failing():
    ok = client.post("/check", json={"source": _source("shapes")}).json()
    assert ok["ok"] is True and ok["main_class"] == "Program"
    bad = client.post("/check", json={"source": "class Program\n    int x\n    method main()\n        x += x\n"})
    assert bad.status_code == 200
    assert bad.json()["diagnostics"][0]["rule"] == "AssignVar"
    assert bad.json()["diagnostics"][0]["line"] == 4


@pytest.mark.parametrize("backend", ["interpreter", "vm"])
def test_run(backend):
    response = client.post("/run", json={"source": _source("fib"), "backend": backend})
    assert response.status_code == 200
    body = response.json()
    assert body["outputs"] == {"x1": 5, "x2": 8, "n": 0}
    assert (body["steps"] is None) == (backend == "interpreter")


def test_run_failures_are_400():
    response = client.post("/run", json={"source": "class Program method main( skip"})
    assert response.status_code == 400
    assert response.json()["detail"]["error"] == "ParseError"
    response = client.post("/run", json={"source": _source("fib"), "backend": "fpga"})
    assert response.status_code == 400


def test_runtime_error_detail():
    source = "class Program\n    int x\n    int y\n    method main()\n        x += 7 / y\n"
    detail = client.post("/run", json={"source": source}).json()["detail"]
    assert detail["error"] == "DivisionByZero"
    assert detail["diagnostics"][0]["line"] == 5


def test_exec_matches():
    body = client.post("/exec", json={"source": _source("date")}).json()
    assert body["match"] is True
    assert body["vm"] == body["interpreter"] == {"day": 1, "month": 1, "tomorrow": 2}
    assert body["steps"] > 0


def test_compile_and_simulate():
    compiled = client.post("/compile", json={"source": _source("objblock")}).json()
    assert compiled["instructions"] > 0 and compiled["source_lines"] > 0
    simulated = client.post("/simulate", json={"pal": compiled["pal"], "dump_memory": "0:1"}).json()
    assert simulated["outputs"] == {"result": 5}
    assert simulated["trapped"] is False
    assert simulated["memory"] == ["0: 5"]


def test_simulate_bad_range_is_400():
    response = client.post("/simulate", json={"pal": "START\nFINISH\n", "dump_memory": "9:1"})
    assert response.status_code == 400


def test_invert_keeps_calls_and_flips_their_order():
    inverted = client.post("/invert", json={"source": _source("objblock")}).json()["source"]
    calls = [line.strip() for line in inverted.splitlines() if "obj::" in line]
    assert calls == ["uncall obj::add5()", "call obj::get(result)", "call obj::add5()"]
    assert "data -= 5" in inverted


def test_inverted_program_runs_the_original_backwards():
    inverted = client.post("/invert", json={"source": _source("date")}).json()["source"]
    response = client.post("/run", json={"source": inverted})
    assert response.status_code == 200
    assert response.json()["outputs"] == {"day": -1, "month": -1, "tomorrow": -2}


def test_layout():
    layout = client.post("/layout", json={"source": _source("shapes")}).json()["layout"]
    assert "class Program" in layout

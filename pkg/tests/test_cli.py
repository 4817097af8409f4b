import sys
import os
import json

import pytest
from click.testing import CliRunner

# Add src to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from main import main
from src.frontend import desugar, format_program, parse_source
from src.services import toolchain_service

CORPUS_DIR = os.path.join(os.path.dirname(__file__), '..', 'corpus')
LINKED_LIST = os.path.join(CORPUS_DIR, "linkedlist.rpl")
OBJBLOCK = os.path.join(CORPUS_DIR, "objblock.rpl")

SELF_UPDATE = """
class Program
    int x
    method main()
        x += x
"""

DIVIDE_BY_FIELD = """
class Program
    int x
    int y
    method main()
        x += 7 / y
"""


@pytest.fixture
def runner():
    return CliRunner()


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_check_ok(runner):
    result = runner.invoke(main, ["check", OBJBLOCK])
    assert result.exit_code == 0
    assert result.stdout.strip() == "ok: 2 classes, main class Program"


def test_check_reports_type_error_with_exit_1(runner, tmp_path):
    result = runner.invoke(main, ["check", _write(tmp_path, "bad.rpl", SELF_UPDATE)])
    assert result.exit_code == 1
    assert "[AssignVar]" in result.stderr
    assert "bad.rpl:5:" in result.stderr


def test_check_json(runner, tmp_path):
    result = runner.invoke(main, ["check", "--json", _write(tmp_path, "bad.rpl", SELF_UPDATE)])
    assert result.exit_code == 1
    payload = json.loads(result.stdout)
    assert payload["ok"] is False
    assert payload["diagnostics"][0]["rule"] == "AssignVar"


def test_parse_error_is_static(runner, tmp_path):
    result = runner.invoke(main, ["run", _write(tmp_path, "bad.rpl", "class Program method main( skip")])
    assert result.exit_code == 1
    assert "ParseError" in result.stderr


def test_run_prints_fields(runner):
    result = runner.invoke(main, ["run", LINKED_LIST])
    assert result.exit_code == 0
    assert result.stdout.splitlines() == ["result = 15", "empty = 0"]


def test_run_on_vm_backend_as_json(runner):
    result = runner.invoke(main, ["run", "--backend", "vm", "--json", LINKED_LIST])
    assert result.exit_code == 0
    assert json.loads(result.stdout) == {"result": 15, "empty": 0}


def test_run_reads_standard_input(runner):
    with open(OBJBLOCK, encoding="utf-8") as f:
        result = runner.invoke(main, ["run", "-"], input=f.read())
    assert result.exit_code == 0
    assert result.stdout.strip() == "result = 5"


def test_runtime_error_exit_2(runner, tmp_path):
    result = runner.invoke(main, ["run", _write(tmp_path, "div.rpl", DIVIDE_BY_FIELD)])
    assert result.exit_code == 2
    assert "[DivisionByZero]" in result.stderr


def test_invert_twice_gives_back_the_program(runner, tmp_path):
    once = runner.invoke(main, ["invert", LINKED_LIST])
    assert once.exit_code == 0
    twice = runner.invoke(main, ["invert", "-"], input=once.stdout)
    assert twice.exit_code == 0
    with open(LINKED_LIST, encoding="utf-8") as f:
        assert twice.stdout == format_program(desugar(parse_source(f.read())))


def test_compile_then_simulate(runner, tmp_path):
    pal = str(tmp_path / "objblock.pal")
    result = runner.invoke(main, ["compile", OBJBLOCK, "-o", pal])
    assert result.exit_code == 0
    result = runner.invoke(main, ["simulate", pal])
    assert result.exit_code == 0
    assert result.stdout.splitlines()[0] == "result = 5"
    assert "halted after" in result.stderr


def test_compile_dump_layout(runner):
    result = runner.invoke(main, ["compile", "--dump-layout", OBJBLOCK])
    assert result.exit_code == 0
    assert "class Object" in result.stderr
    assert "FINISH" in result.stdout


def test_simulate_json_with_memory_dump(runner, tmp_path):
    pal = _write(tmp_path, "tiny.pal", "START\nXORI $4 9\nFINISH\n")
    result = runner.invoke(main, ["simulate", "--json", "--dump-memory", "0:2", pal])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["registers"][4] == 9
    assert payload["memory"] == ["0: 0", "1: 0"]
    assert payload["trapped"] is False


def test_simulate_trap_exit_2(runner, tmp_path):
    compiled = runner.invoke(main, ["compile", "--runtime-checks", _write(tmp_path, "div.rpl", DIVIDE_BY_FIELD)])
    assert compiled.exit_code == 0
    result = runner.invoke(main, ["simulate", _write(tmp_path, "div.pal", compiled.stdout)])
    assert result.exit_code == 2
    assert "runtime check failed" in result.stderr


def test_simulate_errors(runner, tmp_path):
    result = runner.invoke(main, ["simulate", _write(tmp_path, "bad.pal", "START\nJUMP $1\nFINISH\n")])
    assert result.exit_code == 1
    assert "UnknownMnemonic" in result.stderr
    long = "START\n" + "ADDI $4 1\n" * 10 + "FINISH\n"
    result = runner.invoke(main, ["simulate", "--steps", "5", _write(tmp_path, "long.pal", long)])
    assert result.exit_code == 2
    assert "StepLimitExceeded" in result.stderr


def test_exec_prints_outputs(runner):
    result = runner.invoke(main, ["exec", LINKED_LIST])
    assert result.exit_code == 0
    assert "result = 15" in result.stdout.splitlines()


def test_exec_divergence_exit_3(runner, monkeypatch):
    monkeypatch.setattr(toolchain_service, "compare_outputs", lambda a, b: ["result: interpreter 15, vm 16"])
    result = runner.invoke(main, ["exec", LINKED_LIST])
    assert result.exit_code == 3
    assert "divergence: result: interpreter 15, vm 16" in result.stderr

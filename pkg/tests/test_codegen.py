import sys
import os
import random

import numpy as np
import pytest

# Add src to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.backends import ExecutionBackendFactory
from src.codegen import ExpressionEmitter, RegisterPool, compile_program, unevaluate
from src.codegen.generator import OUTPUT_LABEL_PREFIX
from src.core import ast
from src.core.constants import BinaryOperator, Opcode, RuntimeErrorKind
from src.core.errors import RegisterPoolExhausted, RooplRuntimeError
from src.frontend import desugar, parse_source
from src.interpreter import Store, eval_expression
from src.pisa import make, resolve
from src.services import toolchain_service
from src.vm import load, run

from tests.test_interpreter import CORPUS, load_expected

CORPUS_DIR = os.path.join(os.path.dirname(__file__), '..', 'corpus')


def _read(name):
    with open(os.path.join(CORPUS_DIR, f"{name}.rpl"), encoding="utf-8") as f:
        return f.read()


@pytest.mark.parametrize("name", CORPUS)
def test_vm_agrees_with_interpreter(name):
    result = toolchain_service.exec_source(_read(name))
    assert result.match, result.differences
    assert result.vm == load_expected(name)


@pytest.mark.parametrize("name", CORPUS)
def test_compiled_code_leaves_no_garbage(name):
    program = desugar(parse_source(_read(name)))
    machine_program = resolve(compile_program(program).instructions)
    initial = load(machine_program)
    final = run(initial.copy())
    assert final.registers == [0] * 32
    outputs = {address for label, address in machine_program.labels.items()
               if label.startswith(OUTPUT_LABEL_PREFIX)}
    changed = set(np.flatnonzero(final.memory != initial.memory).tolist())
    assert changed <= outputs


def test_linked_list_code_size_is_proportional_to_source():
    result = toolchain_service.compile_source(_read("linkedlist"))
    ratio = result.instructions / result.source_lines
    assert 5 <= ratio <= 25


def test_compiled_program_layout():
    result = toolchain_service.compile_source(_read("objblock"))
    lines = result.pal.splitlines()
    assert lines[0].startswith("l_out.result:")
    assert any(line.split()[0] == "START" for line in lines if line.strip())
    assert any(line.startswith("l_Object.add5:") for line in lines)
    assert any(line.startswith("l_Object_vt:") for line in lines)
    assert any(line.startswith("l_Program_vt:") for line in lines)
    assert result.main_class == "Program"


DIVIDE_BY_FIELD = """
class Program
    int x
    int y
    method main()
        x += 7 / y
"""

BAD_ASSERTION = """
class Program
    int x
    method main()
        if x = 0 then
            x += 1
        fi x = 0
"""

NIL_CALL = """
class Cell
    int v
    method set()
        v += 1

class Program
    Cell c
    method main()
        call c::set()
"""


@pytest.mark.parametrize("source", [DIVIDE_BY_FIELD, BAD_ASSERTION, NIL_CALL], ids=["division", "if", "nil"])
def test_runtime_checks_halt_through_error_handler(source):
    vm = ExecutionBackendFactory.create_backend("vm", runtime_checks=True)
    with pytest.raises(RooplRuntimeError) as info:
        vm.execute(desugar(parse_source(source)))
    assert info.value.kind is RuntimeErrorKind.RUNTIME_CHECK_TRAP
    assert vm.state.trapped


def test_runtime_checks_do_not_change_results():
    source = _read("linkedlist")
    plain = toolchain_service.exec_source(source)
    checked = toolchain_service.exec_source(source, runtime_checks=True)
    assert checked.vm == plain.vm
    assert checked.steps > plain.steps


def test_division_and_remainder_truncate_toward_zero():
    source = """
class Program
    int q
    int r
    int a
    int b
    method main()
        a -= 17
        b += 5
        q += a / b
        r += a % b
        b -= 5
        a += 17
"""
    result = toolchain_service.exec_source(source)
    assert result.match
    assert result.vm == {"q": -3, "r": -2, "a": 0, "b": 0}


def test_register_pool_is_lifo():
    pool = RegisterPool()
    a, b = pool.acquire_many(2)
    assert (a, b) == (4, 5)
    with pytest.raises(RuntimeError):
        pool.release(a)
    pool.release(b)
    pool.release(a)
    assert pool.in_use == 0


def test_register_pool_mark_and_exhaustion():
    pool = RegisterPool()
    mark = pool.mark()
    pool.acquire_many(28)
    with pytest.raises(RegisterPoolExhausted):
        pool.acquire()
    pool.release_to(mark)
    assert pool.acquire() == 4


def _random_word(rng):
    if rng.random() < 0.5:
        return rng.randint(-40, 40)
    return rng.randint(-2 ** 31, 2 ** 31 - 1)


def _run_straight_line(code):
    program = resolve([make(Opcode.START)] + code + [make(Opcode.FINISH)])
    return run(load(program, memory_size=len(program) + 16))


def _machine_value(e):
    code, register = ExpressionEmitter(RegisterPool(), lookup=None).evaluate(e)
    return int(_run_straight_line(code).registers[register])


DIVISIONS = (BinaryOperator.DIV, BinaryOperator.MOD)


def test_compiled_operators_agree_with_the_interpreter():
    rng = random.Random(2024)
    for index in range(1000):
        a, b = _random_word(rng), _random_word(rng)
        operators = [op for op in BinaryOperator if op not in DIVISIONS]
        # division templates are long; every eighth pair covers them
        if index % 8 == 0:
            operators += DIVISIONS if b != 0 else ()
        for op in operators:
            e = ast.Binary(op, ast.Constant(a), ast.Constant(b))
            assert _machine_value(e) == eval_expression({}, Store(), e), f"{a} {op.value} {b}"


def _constant_expression(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return ast.Constant(_random_word(rng))
    op = rng.choice([op for op in BinaryOperator if op not in DIVISIONS])
    return ast.Binary(op, _constant_expression(rng, depth - 1), _constant_expression(rng, depth - 1))


def test_unevaluation_clears_every_register():
    rng = random.Random(77)
    for _ in range(100):
        e = _constant_expression(rng, 3)
        code, register = ExpressionEmitter(RegisterPool(), lookup=None).evaluate(e)
        assert int(_run_straight_line(code).registers[register]) == eval_expression({}, Store(), e)
        state = _run_straight_line(code + unevaluate(code))
        assert list(state.registers) == [0] * 32 and state.br == 0

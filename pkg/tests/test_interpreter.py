import sys
import os
import random

import pytest

# Add src to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.analysis import build_class_model
from src.core import ast
from src.core.constants import Direction, RuntimeErrorKind
from src.core.errors import RooplRuntimeError
from src.frontend import desugar, parse_source
from src.interpreter import Interpreter, Store, eval_expression, run_on_deep_stack, run_program

from tests.test_inverter import MODEL_SOURCE, StatementGenerator, _store

CORPUS_DIR = os.path.join(os.path.dirname(__file__), '..', 'corpus')
CORPUS = sorted(n[:-4] for n in os.listdir(CORPUS_DIR) if n.endswith(".rpl"))


def load_expected(name):
    """Lee el fichero name.expected.txt como diccionario campo -> valor."""
    outputs = {}
    with open(os.path.join(CORPUS_DIR, f"{name}.expected.txt"), encoding="utf-8") as f:
        for line in f:
            if line.strip():
                field, value = line.split("=")
                outputs[field.strip()] = int(value)
    return outputs


def load_program(name):
    with open(os.path.join(CORPUS_DIR, f"{name}.rpl"), encoding="utf-8") as f:
        return desugar(parse_source(f.read()))


def _run(source, **options):
    return run_program(desugar(parse_source(source)), **options)


def _runtime_kind(source, **options):
    with pytest.raises(RooplRuntimeError) as info:
        _run(source, **options)
    return info.value.kind


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_outputs(name):
    assert run_program(load_program(name)) == load_expected(name)


def test_outputs_follow_field_declaration_order():
    outputs = run_program(load_program("arith"))
    assert list(outputs) == list(load_expected("arith"))


def test_uncall_runs_the_inverse_body():
    outputs = _run("""
class Program
    int x
    int y
    method step(int k)
        x += k
        x <=> y
    method main()
        y += 10
        call step(y)
        uncall step(x)
""")
    assert outputs == {"x": 0, "y": 10}


def test_dynamic_dispatch_uses_the_runtime_class():
    outputs = _run("""
class Base
    method get(int out)
        out += 1

class Derived inherits Base
    method get(int out)
        out += 2

class Program
    int a
    method ask(Base b)
        call b::get(a)
    method main()
        construct Derived d
            call ask(d)
        destruct d
""")
    assert outputs == {"a": 2}


def test_if_assertion_failure():
    kind = _runtime_kind("""
class Program
    int x
    method main()
        if x = 0 then
            x += 1
        fi x = 0
""")
    assert kind is RuntimeErrorKind.ASSERTION_IF


def test_loop_entry_assertion_on_reentry():
    kind = _runtime_kind("""
class Program
    int x
    method main()
        from x = 0 do
            skip
        loop
            skip
        until x = 1
""")
    assert kind is RuntimeErrorKind.ASSERTION_LOOP_ENTRY


def test_loop_entry_assertion_on_first_arrival():
    kind = _runtime_kind("""
class Program
    int x
    method main()
        from x = 1 do x += 1 until x = 2
""")
    assert kind is RuntimeErrorKind.ASSERTION_LOOP_ENTRY


def test_delocal_mismatch():
    kind = _runtime_kind("""
class Program
    int x
    method main()
        local int t = 0
            t += 3
        delocal int t = 0
""")
    assert kind is RuntimeErrorKind.DELOCAL_MISMATCH


def test_fields_must_be_zero_at_destruct():
    kind = _runtime_kind("""
class Cell
    int v
    method set()
        v += 1

class Program
    int x
    method main()
        construct Cell c
            call c::set()
        destruct c
""")
    assert kind is RuntimeErrorKind.NON_ZERO_FIELDS


def test_reference_must_be_restored_at_destruct():
    kind = _runtime_kind("""
class Cell
    int v
    method get(int out)
        out += v

class Program
    Cell other
    method main()
        construct Cell c
            c <=> other
        destruct c
""")
    assert kind is RuntimeErrorKind.REFERENCE_NOT_RESTORED


def test_nil_dereference():
    kind = _runtime_kind("""
class Cell
    int v
    method set()
        v += 1

class Program
    Cell c
    method main()
        call c::set()
""")
    assert kind is RuntimeErrorKind.NIL_DEREFERENCE


def test_division_by_zero_carries_location():
    with pytest.raises(RooplRuntimeError) as info:
        _run("class Program\n    int x\n    int y\n    method main()\n        x += 7 / y\n")
    assert info.value.kind is RuntimeErrorKind.DIVISION_BY_ZERO
    assert info.value.location.line == 5


def test_runaway_recursion_is_stack_overflow():
    kind = _runtime_kind("""
class Program
    int x
    method spin()
        call spin()
    method main()
        call spin()
""", max_call_depth=50)
    assert kind is RuntimeErrorKind.STACK_OVERFLOW


def test_runtime_error_collects_call_trace():
    with pytest.raises(RooplRuntimeError) as info:
        _run("""
class Program
    int x
    int y
    method inner()
        x += 1 / y
    method main()
        call inner()
""")
    lines = [location.line for location in info.value.trace]
    assert lines[0] == 6 and 8 in lines


def _store_size_after_main(program):
    interpreter = Interpreter(build_class_model(program))
    outputs = interpreter.run_main(program)
    return outputs, len(interpreter.store)


def test_rtm_simulation_leaves_no_garbage():
    program = load_program("rtm_increment")
    outputs, size = run_on_deep_stack(_store_size_after_main, program)
    assert outputs == load_expected("rtm_increment")
    # main object plus one cell per field
    assert size == len(outputs) + 1


def test_expression_evaluation_leaves_the_store_unchanged():
    rng = random.Random(11)
    generator = StatementGenerator(rng)
    for _ in range(500):
        store = Store()
        env = {name: store.allocate(rng.randint(-50, 50)) for name in ("a", "b", "c")}
        before = store.snapshot()
        try:
            eval_expression(env, store, generator.expression(frozenset(env), depth=3))
        except RooplRuntimeError:
            pass
        assert store.snapshot() == before


def _model_with_method(body):
    program = desugar(parse_source(MODEL_SOURCE))
    *others, main_class = program.classes
    extended = ast.ClassDecl(main_class.name, main_class.base, main_class.fields,
                             main_class.methods + (ast.MethodDecl("q", (), body),))
    return build_class_model(ast.Program(tuple(others) + (extended,)))


def test_uncall_forward_matches_call_backward():
    generator = StatementGenerator(random.Random(42))
    fields_in_use = frozenset({"a", "b", "c"})
    for seed in range(200):
        body = generator.body(fields_in_use, fields_in_use, 4)
        model = _model_with_method(body)
        snapshots = []
        for mode in ("uncall", "call backward", "body backward"):
            store, this, fields = _store(model, random.Random(seed))
            interpreter = Interpreter(model, store)
            if mode == "uncall":
                interpreter.exec_statement(this, "Program", dict(fields), ast.LocalUncall("q", ()))
            elif mode == "call backward":
                interpreter.exec_statement(this, "Program", dict(fields), ast.LocalCall("q", ()), Direction.BACKWARD)
            else:
                for s in reversed(body):
                    interpreter.exec_statement(this, "Program", dict(fields), s, Direction.BACKWARD)
            snapshots.append(store.snapshot())
        assert snapshots[0] == snapshots[1] == snapshots[2]

import sys
import os

import pytest

# Add src to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.analysis import TypeEnvironment, build_class_model, check_program, type_of_expression
from src.core import ast
from src.core.constants import BinaryOperator
from src.core.errors import TypeCheckError
from src.frontend import desugar, parse_source

CORPUS_DIR = os.path.join(os.path.dirname(__file__), '..', 'corpus')

PRELUDE = """
class Node
    int data
    Node next
    method get(int out)
        out += data
    method link(Node n)
        next <=> n

class Leaf inherits Node
    method get(int out)
        out -= data

class Program
    int x
    int y
    Node head
    method helper(int a, Node n)
        a += 1
"""


def _diagnostics(main_body):
    source = PRELUDE + "    method main()\n" + "\n".join("        " + line for line in main_body.splitlines())
    program = desugar(parse_source(source))
    return check_program(build_class_model(program), program)


def _rules(main_body):
    return [d.rule for d in _diagnostics(main_body)]


@pytest.mark.parametrize("name", sorted(n for n in os.listdir(CORPUS_DIR) if n.endswith(".rpl")))
def test_corpus_programs_are_well_typed(name):
    with open(os.path.join(CORPUS_DIR, name), encoding="utf-8") as f:
        program = desugar(parse_source(f.read()))
    assert check_program(build_class_model(program), program) == []


def test_well_typed_statements():
    assert _rules("""x += y * 2
x <=> y
if x = y then
    y += 1
else
    y -= 1
fi x != y
construct Leaf l
    call l::get(x)
    uncall l::get(x)
    call head::link(l)
    uncall head::link(l)
destruct l
local int z = x
    z ^= y
delocal int z = x
from x = 0 do x += 1 until x = 3""") == []


def test_update_target_in_expression():
    assert _rules("x += x") == ["AssignVar"]
    assert _rules("x -= y + x") == ["AssignVar"]


def test_update_of_object_variable():
    assert _rules("head += 1") == ["AssignVar"]


def test_unbound_variable():
    assert _rules("x += z") == ["UnboundVariable"]


def test_swap_needs_equal_types():
    assert _rules("x <=> head") == ["SwapVar"]


def test_object_comparisons():
    assert _rules("if head = nil then skip fi head = nil") == []
    assert _rules("if head < nil then skip fi head = nil") == ["NilInArithmetic"]


def test_local_call_rejects_field_arguments():
    assert "Call" in _rules("call helper(x, head)")
    assert _rules("local int a = 0, b = 0\n    call helper(a, b)\ndelocal int a = 0, b = 0") == ["Call"]


def test_local_call_arity_and_argument_types():
    assert _rules("local int a = 0\n    call helper(a)\ndelocal int a = 0") == ["Call"]
    assert _rules("local int a = 0\n    construct Node n\n        call helper(n, n)\n    destruct n\n"
                  "delocal int a = 0") != []


def test_object_call_rules():
    assert _rules("call x::get(y)") == ["CallObject"]
    assert _rules("call head::get(head)") != []
    assert _rules("uncall head::missing(x)") == ["UncallObject"]
    # callee passed as its own argument
    assert _rules("call head::link(head)") == ["CallObject"]


def test_subtype_arguments_are_accepted():
    assert _rules("construct Leaf l\n    call head::link(l)\n    uncall head::link(l)\ndestruct l") == []


def test_type_of_expression():
    env = TypeEnvironment({"x": "int", "n": "Node"})
    assert type_of_expression(env, ast.Binary(BinaryOperator.ADD, ast.Variable("x"), ast.Constant(1))) == "int"
    assert type_of_expression(env, ast.Binary(BinaryOperator.EQ, ast.Variable("n"), ast.Nil())) == "int"
    with pytest.raises(TypeCheckError):
        type_of_expression(env, ast.Binary(BinaryOperator.ADD, ast.Variable("n"), ast.Constant(1)))
    with pytest.raises(TypeCheckError) as info:
        type_of_expression(env, ast.Variable("q"))
    assert info.value.diagnostics()[0].rule == "UnboundVariable"

"""
Program inversion.

``invert_statement`` maps a statement to the statement that undoes it;
``invert_statement_modified`` additionally leaves invocations alone, which is
what inverting every method of a program needs (calling the inverted method
already runs backwards). Method reversals and constructor blocks expand into
call sequences whose order must flip too, so program inversion works on the
desugared tree.
"""
import logging
from typing import Callable, Sequence, Tuple

from src.core import ast

logger = logging.getLogger(__name__)


def _invert_body(statements: Sequence[ast.Statement], invert: Callable) -> Tuple[ast.Statement, ...]:
    return tuple(invert(s) for s in reversed(statements))


def _invert_optional(statements, invert):
    return None if statements is None else _invert_body(statements, invert)


def _invert(s: ast.Statement, invert: Callable) -> ast.Statement:
    if isinstance(s, ast.Assign):
        return ast.Assign(s.target, s.op.inverse(), s.expr, s.location)
    if isinstance(s, (ast.Swap, ast.Skip)):
        return s
    # entry and exit conditions trade places when running backwards
    if isinstance(s, ast.If):
        return ast.If(s.assertion, _invert_body(s.then_body, invert), _invert_optional(s.else_body, invert),
                      s.test, s.location)
    if isinstance(s, ast.Loop):
        return ast.Loop(s.exit, _invert_optional(s.do_body, invert), _invert_optional(s.loop_body, invert),
                        s.entry, s.location)
    if isinstance(s, ast.ObjectBlock):
        return ast.ObjectBlock(s.class_name, s.var, _invert_body(s.body, invert), s.location)
    if isinstance(s, ast.LocalBlock):
        return ast.LocalBlock(s.var, s.exit, _invert_body(s.body, invert), s.init, s.location)
    if isinstance(s, ast.LocalCall):
        return ast.LocalUncall(s.method, s.args, s.location)
    if isinstance(s, ast.LocalUncall):
        return ast.LocalCall(s.method, s.args, s.location)
    if isinstance(s, ast.ObjectCall):
        return ast.ObjectUncall(s.callee, s.method, s.args, s.location)
    if isinstance(s, ast.ObjectUncall):
        return ast.ObjectCall(s.callee, s.method, s.args, s.location)
    if isinstance(s, ast.ExpressionCall):
        return ast.ExpressionCall(not s.uncall, s.callee, s.method, s.args, s.location)
    if isinstance(s, ast.ConstructorBlock):
        return ast.ConstructorBlock(s.class_name, s.var, s.exit_args, _invert_body(s.body, invert),
                                    s.args, s.location)
    if isinstance(s, ast.Reversal):
        return ast.Reversal(s.callee, s.method, s.args, _invert_body(s.body, invert), s.location)
    raise TypeError(f"cannot invert {type(s).__name__}")


def invert_statement(s: ast.Statement) -> ast.Statement:
    return _invert(s, invert_statement)


def invert_statements(statements: Sequence[ast.Statement]) -> Tuple[ast.Statement, ...]:
    """Inverse of a sequence: reversed order, each statement inverted."""
    return _invert_body(statements, invert_statement)


def invert_statement_modified(s: ast.Statement) -> ast.Statement:
    if isinstance(s, ast.INVOCATIONS) or isinstance(s, ast.ExpressionCall):
        return s
    if isinstance(s, (ast.ConstructorBlock, ast.Reversal)):
        raise TypeError(f"{type(s).__name__} must be desugared before its method is inverted")
    return _invert(s, invert_statement_modified)


def invert_method(method: ast.MethodDecl) -> ast.MethodDecl:
    return ast.MethodDecl(method.name, method.params,
                          _invert_body(method.body, invert_statement_modified), method.location)


def invert_class(c: ast.ClassDecl) -> ast.ClassDecl:
    return ast.ClassDecl(c.name, c.base, c.fields, tuple(invert_method(m) for m in c.methods), c.location)


def invert_program(program: ast.Program) -> ast.Program:
    """
    Invierte cada método de cada clase.

    Args:
        program: programa desazucarado a invertir
    Returns:
        Programa cuyo main ejecuta el original hacia atrás
    """
    logger.debug(f"Inverting {len(program.classes)} classes")
    return ast.Program(tuple(invert_class(c) for c in program.classes), program.location)

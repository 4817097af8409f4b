"""
Rewrites the language extensions into core statements.

Constructor blocks, expression arguments, method reversals and short-form
conditionals/loops disappear; local blocks and every core form pass through.
"""
import itertools
import logging
from typing import Iterator, List, Optional, Sequence, Tuple

from src.core import ast
from src.core.constants import CONSTRUCTOR_METHOD, FRESH_PREFIX

logger = logging.getLogger(__name__)


class FreshNames:
    """Generates ``$tmpN`` identifiers not already used by the program."""

    def __init__(self, taken: set):
        self._taken = set(taken)
        self._counter = itertools.count()

    def next(self) -> str:
        while True:
            name = f"{FRESH_PREFIX}{next(self._counter)}"
            if name not in self._taken:
                self._taken.add(name)
                return name


def _invocation(uncall: bool, callee: Optional[str], method: str, args: Sequence[str], location):
    if callee is None:
        node = ast.LocalUncall if uncall else ast.LocalCall
        return node(method, tuple(args), location)
    node = ast.ObjectUncall if uncall else ast.ObjectCall
    return node(callee, method, tuple(args), location)


def _call_with_expressions(uncall: bool, callee: Optional[str], method: str,
                           args: Sequence[ast.Expression], location, fresh: FreshNames) -> ast.Statement:
    """call q(.., e, ..) => local int t = e  call q(.., t, ..)  delocal t = e"""
    names: List[str] = []
    temporaries: List[Tuple[str, ast.Expression]] = []
    for arg in args:
        if isinstance(arg, ast.Variable):
            names.append(arg.name)
        else:
            temp = fresh.next()
            temporaries.append((temp, arg))
            names.append(temp)
    statement = _invocation(uncall, callee, method, names, location)
    for temp, expr in reversed(temporaries):
        statement = ast.LocalBlock(temp, expr, (statement,), expr, location)
    return statement


class Desugarer:
    def __init__(self, fresh: FreshNames):
        self.fresh = fresh

    def body(self, statements: Sequence[ast.Statement]) -> Tuple[ast.Statement, ...]:
        out: List[ast.Statement] = []
        for s in statements:
            out.extend(self.statement(s))
        return tuple(out)

    def statement(self, s: ast.Statement) -> Iterator[ast.Statement]:
        if isinstance(s, ast.If):
            else_body = s.else_body if s.else_body is not None else (ast.Skip(s.location),)
            yield ast.If(s.test, self.body(s.then_body), self.body(else_body), s.assertion, s.location)
        elif isinstance(s, ast.Loop):
            do_body = s.do_body if s.do_body is not None else (ast.Skip(s.location),)
            loop_body = s.loop_body if s.loop_body is not None else (ast.Skip(s.location),)
            yield ast.Loop(s.entry, self.body(do_body), self.body(loop_body), s.exit, s.location)
        elif isinstance(s, ast.ObjectBlock):
            yield ast.ObjectBlock(s.class_name, s.var, self.body(s.body), s.location)
        elif isinstance(s, ast.LocalBlock):
            yield ast.LocalBlock(s.var, s.init, self.body(s.body), s.exit, s.location)
        elif isinstance(s, ast.ConstructorBlock):
            construct = _call_with_expressions(False, s.var, CONSTRUCTOR_METHOD, s.args, s.location, self.fresh)
            deconstruct = _call_with_expressions(True, s.var, CONSTRUCTOR_METHOD, s.exit_args, s.location, self.fresh)
            inner = (construct,) + self.body(s.body) + (deconstruct,)
            yield ast.ObjectBlock(s.class_name, s.var, inner, s.location)
        elif isinstance(s, ast.ExpressionCall):
            yield _call_with_expressions(s.uncall, s.callee, s.method, s.args, s.location, self.fresh)
        elif isinstance(s, ast.Reversal):
            yield _call_with_expressions(False, s.callee, s.method, s.args, s.location, self.fresh)
            yield from self.body(s.body)
            yield _call_with_expressions(True, s.callee, s.method, s.args, s.location, self.fresh)
        else:
            yield s


def desugar(program: ast.Program) -> ast.Program:
    """
    Elimina las extensiones del lenguaje.

    Args:
        program: AST tal como sale del parser
    Returns:
        Program con sólo formas núcleo (más bloques local)
    """
    desugarer = Desugarer(FreshNames(ast.program_identifiers(program)))
    classes = []
    for c in program.classes:
        methods = tuple(
            ast.MethodDecl(m.name, m.params, desugarer.body(m.body), m.location)
            for m in c.methods
        )
        classes.append(ast.ClassDecl(c.name, c.base, c.fields, methods, c.location))
    logger.debug(f"Desugared {len(classes)} classes")
    return ast.Program(tuple(classes), program.location)

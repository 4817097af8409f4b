"""
Static type checking of core ROOPL programs, including the argument aliasing
restrictions of method invocations.
"""
import logging
from typing import Dict, FrozenSet, List, Optional, Sequence

from src.core import ast
from src.core.constants import BinaryOperator
from src.core.errors import ClassAnalysisError, Diagnostic, TypeCheckError

from .class_model import ClassModel, find_main

logger = logging.getLogger(__name__)

INT = ast.INT_TYPE
# bottom of the class types; "nil" is a keyword so no class can share the name
NIL = "nil"

OBJECT_COMPARISONS = frozenset({BinaryOperator.EQ, BinaryOperator.NEQ})


class TypeEnvironment:
    """Immutable map from identifiers to types; ``bind`` shadows."""

    def __init__(self, types: Optional[Dict[str, str]] = None, fields: FrozenSet[str] = frozenset()):
        self._types = dict(types or {})
        self._fields = frozenset(fields)

    @classmethod
    def for_method(cls, model: ClassModel, class_name: str, method: ast.MethodDecl) -> "TypeEnvironment":
        env = cls({f.name: f.type for f in model.fields(class_name)},
                  frozenset(f.name for f in model.fields(class_name)))
        for p in method.params:
            env = env.bind(p.name, p.type)
        return env

    def bind(self, name: str, type_name: str) -> "TypeEnvironment":
        types = dict(self._types)
        types[name] = type_name
        return TypeEnvironment(types, self._fields - {name})

    def lookup(self, name: str) -> Optional[str]:
        return self._types.get(name)

    def is_field(self, name: str) -> bool:
        return name in self._fields

    def __contains__(self, name: str) -> bool:
        return name in self._types


def vars_of(e: ast.Expression) -> set:
    """Free variables of an expression."""
    return {node.name for node in ast.walk_expression(e) if isinstance(node, ast.Variable)}


def _fail(rule: str, message: str, location) -> TypeCheckError:
    return TypeCheckError([Diagnostic(rule, message, location)])


def type_of_expression(env: TypeEnvironment, e: ast.Expression) -> str:
    """
    Calcula el tipo de una expresión.

    Args:
        env: entorno de tipos
        e: expresión
    Returns:
        "int", el nombre de una clase o "nil"
    """
    if isinstance(e, ast.Constant):
        return INT
    if isinstance(e, ast.Nil):
        return NIL
    if isinstance(e, ast.Variable):
        found = env.lookup(e.name)
        if found is None:
            raise _fail("UnboundVariable", f"variable '{e.name}' is not in scope", e.location)
        return found
    left = type_of_expression(env, e.left)
    right = type_of_expression(env, e.right)
    if left == INT and right == INT:
        return INT
    if e.op in OBJECT_COMPARISONS and INT not in (left, right):
        if left == right or NIL in (left, right):
            return INT
        raise _fail("TypeMismatch", f"cannot compare '{left}' with '{right}'", e.location)
    if NIL in (left, right):
        raise _fail("NilInArithmetic", f"nil used as operand of '{e.op.value}'", e.location)
    raise _fail("TypeMismatch", f"operator '{e.op.value}' needs int operands, got '{left}' and '{right}'",
                e.location)


class StatementChecker:
    def __init__(self, model: ClassModel, class_name: str):
        self.model = model
        self.class_name = class_name
        self.diagnostics: List[Diagnostic] = []

    def report(self, rule: str, message: str, location) -> None:
        self.diagnostics.append(Diagnostic(rule, message, location))

    def expect_int(self, env: TypeEnvironment, e: ast.Expression, rule: str) -> None:
        try:
            found = type_of_expression(env, e)
        except TypeCheckError as exc:
            self.diagnostics.extend(exc.diagnostics())
            return
        if found != INT:
            self.report(rule, f"expected an int expression, got '{found}'", e.location)

    def variable_type(self, env: TypeEnvironment, name: str, location) -> Optional[str]:
        found = env.lookup(name)
        if found is None:
            self.report("UnboundVariable", f"variable '{name}' is not in scope", location)
        return found

    def body(self, env: TypeEnvironment, statements: Sequence[ast.Statement]) -> None:
        for s in statements:
            self.statement(env, s)

    def statement(self, env: TypeEnvironment, s: ast.Statement) -> None:
        if isinstance(s, ast.Skip):
            return
        if isinstance(s, ast.Assign):
            target = self.variable_type(env, s.target, s.location)
            if target is not None and target != INT:
                self.report("AssignVar", f"update target '{s.target}' is not an int", s.location)
            self.expect_int(env, s.expr, "AssignVar")
            if s.target in vars_of(s.expr):
                self.report("AssignVar", f"'{s.target}' appears in its own update expression", s.location)
        elif isinstance(s, ast.Swap):
            left = self.variable_type(env, s.left, s.location)
            right = self.variable_type(env, s.right, s.location)
            if left is not None and right is not None and left != right:
                self.report("SwapVar", f"cannot swap '{left}' with '{right}'", s.location)
        elif isinstance(s, ast.If):
            self.expect_int(env, s.test, "If")
            self.body(env, s.then_body)
            self.body(env, s.else_body or ())
            self.expect_int(env, s.assertion, "If")
        elif isinstance(s, ast.Loop):
            self.expect_int(env, s.entry, "Loop")
            self.body(env, s.do_body or ())
            self.body(env, s.loop_body or ())
            self.expect_int(env, s.exit, "Loop")
        elif isinstance(s, ast.ObjectBlock):
            if not self.model.has_class(s.class_name):
                self.report("UnknownClass", f"unknown class '{s.class_name}'", s.location)
                return
            self.body(env.bind(s.var, s.class_name), s.body)
        elif isinstance(s, ast.LocalBlock):
            self.expect_int(env, s.init, "LocalBlock")
            self.body(env.bind(s.var, INT), s.body)
            self.expect_int(env, s.exit, "LocalBlock")
        elif isinstance(s, (ast.LocalCall, ast.LocalUncall)):
            self.local_call(env, s)
        elif isinstance(s, (ast.ObjectCall, ast.ObjectUncall)):
            self.object_call(env, s)
        else:
            self.report("Unsupported", f"{type(s).__name__} must be desugared before checking", s.location)

    def arguments(self, env: TypeEnvironment, s, method: ast.MethodDecl, rule: str) -> None:
        if len(s.args) != len(method.params):
            self.report(rule, f"'{s.method}' takes {len(method.params)} arguments, got {len(s.args)}", s.location)
            return
        for index, (arg, param) in enumerate(zip(s.args, method.params)):
            if arg in s.args[:index]:
                self.report(rule, f"argument '{arg}' is passed more than once", s.location)
            found = self.variable_type(env, arg, s.location)
            if found is None:
                continue
            if found == INT or param.is_int:
                compatible = found == param.type
            else:
                compatible = self.model.subtype(found, param.type)
            if not compatible:
                self.report(rule, f"argument '{arg}' of type '{found}' does not match parameter "
                                  f"'{param.name}' of type '{param.type}'", s.location)

    def local_call(self, env: TypeEnvironment, s) -> None:
        rule = "Uncall" if isinstance(s, ast.LocalUncall) else "Call"
        entry = self.model.lookup_method(self.class_name, s.method)
        if entry is None:
            self.report(rule, f"class '{self.class_name}' has no method '{s.method}'", s.location)
            return
        for arg in s.args:
            if env.is_field(arg):
                self.report(rule, f"field '{arg}' cannot be passed to a local method", s.location)
        self.arguments(env, s, entry[1], rule)

    def object_call(self, env: TypeEnvironment, s) -> None:
        rule = "UncallObject" if isinstance(s, ast.ObjectUncall) else "CallObject"
        callee = self.variable_type(env, s.callee, s.location)
        if callee is None:
            return
        if callee == INT:
            self.report(rule, f"'{s.callee}' is not an object", s.location)
            return
        entry = self.model.lookup_method(callee, s.method)
        if entry is None:
            self.report(rule, f"class '{callee}' has no method '{s.method}'", s.location)
            return
        if s.callee in s.args:
            self.report(rule, f"'{s.callee}' is passed as an argument to its own method", s.location)
        self.arguments(env, s, entry[1], rule)


def check_statement(model: ClassModel, env: TypeEnvironment, class_name: str,
                    s: ast.Statement) -> List[Diagnostic]:
    checker = StatementChecker(model, class_name)
    checker.statement(env, s)
    return checker.diagnostics


def check_program(model: ClassModel, program: ast.Program) -> List[Diagnostic]:
    """
    Verifica todos los métodos de todas las clases.

    Args:
        model: mapa de clases construido
        program: programa núcleo
    Returns:
        Lista de diagnósticos (vacía si el programa es correcto)
    """
    diagnostics: List[Diagnostic] = []
    try:
        find_main(model)
    except ClassAnalysisError as exc:
        diagnostics.append(exc.to_diagnostic())
    for c in program.classes:
        for m in c.methods:
            checker = StatementChecker(model, c.name)
            checker.body(TypeEnvironment.for_method(model, c.name, m), m.body)
            diagnostics.extend(checker.diagnostics)
    logger.info(f"Type check finished with {len(diagnostics)} diagnostics")
    return diagnostics

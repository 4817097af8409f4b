"""
Abstract syntax of ROOPL programs.

The surface forms produced by the parser (constructor blocks, expression
arguments, method reversals, short ``if``/``from``) live next to the core
forms; ``src.frontend.desugar`` removes everything but the core forms and
``LocalBlock``.  All nodes are immutable and compare structurally; source
locations never take part in equality.
"""
from dataclasses import dataclass, field
from typing import Iterator, Optional, Tuple, Union

from .constants import BinaryOperator, ModOp
from .location import SourceLocation

INT_TYPE = "int"


def _loc() -> Optional[SourceLocation]:
    return field(default=None, compare=False, repr=False)


# ---------- expressions ----------

@dataclass(frozen=True)
class Constant:
    value: int
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class Variable:
    name: str
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class Nil:
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class Binary:
    op: BinaryOperator
    left: "Expression"
    right: "Expression"
    location: Optional[SourceLocation] = _loc()


Expression = Union[Constant, Variable, Nil, Binary]


# ---------- statements ----------

@dataclass(frozen=True)
class Assign:
    target: str
    op: ModOp
    expr: Expression
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class Swap:
    left: str
    right: str
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class If:
    """``else_body`` is None only for the short form before desugaring."""
    test: Expression
    then_body: Tuple["Statement", ...]
    else_body: Optional[Tuple["Statement", ...]]
    assertion: Expression
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class Loop:
    """``do_body``/``loop_body`` are None only for short forms before desugaring."""
    entry: Expression
    do_body: Optional[Tuple["Statement", ...]]
    loop_body: Optional[Tuple["Statement", ...]]
    exit: Expression
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class ObjectBlock:
    class_name: str
    var: str
    body: Tuple["Statement", ...]
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class LocalBlock:
    var: str
    init: Expression
    body: Tuple["Statement", ...]
    exit: Expression
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class LocalCall:
    method: str
    args: Tuple[str, ...]
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class LocalUncall:
    method: str
    args: Tuple[str, ...]
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class ObjectCall:
    callee: str
    method: str
    args: Tuple[str, ...]
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class ObjectUncall:
    callee: str
    method: str
    args: Tuple[str, ...]
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class Skip:
    location: Optional[SourceLocation] = _loc()


# ---------- surface-only statements ----------

@dataclass(frozen=True)
class ExpressionCall:
    """A call or uncall with at least one non-variable argument."""
    uncall: bool
    callee: Optional[str]
    method: str
    args: Tuple[Expression, ...]
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class ConstructorBlock:
    class_name: str
    var: str
    args: Tuple[Expression, ...]
    body: Tuple["Statement", ...]
    exit_args: Tuple[Expression, ...]
    location: Optional[SourceLocation] = _loc()


@dataclass(frozen=True)
class Reversal:
    """``reversal q(x..) s``; ``callee`` is set for ``reversal x::q(..) s``."""
    callee: Optional[str]
    method: str
    args: Tuple[Expression, ...]
    body: Tuple["Statement", ...]
    location: Optional[SourceLocation] = _loc()


Invocation = Union[LocalCall, LocalUncall, ObjectCall, ObjectUncall]
Statement = Union[
    Assign, Swap, If, Loop, ObjectBlock, LocalBlock, LocalCall, LocalUncall,
    ObjectCall, ObjectUncall, Skip, ExpressionCall, ConstructorBlock, Reversal,
]
INVOCATIONS = (LocalCall, LocalUncall, ObjectCall, ObjectUncall)
SURFACE_ONLY = (ExpressionCall, ConstructorBlock, Reversal)


# ---------- declarations ----------

@dataclass(frozen=True)
class VarDecl:
    type: str
    name: str
    location: Optional[SourceLocation] = _loc()

    @property
    def is_int(self) -> bool:
        return self.type == INT_TYPE


@dataclass(frozen=True)
class MethodDecl:
    name: str
    params: Tuple[VarDecl, ...]
    body: Tuple[Statement, ...]
    location: Optional[SourceLocation] = _loc()

    @property
    def signature(self) -> Tuple[str, ...]:
        return tuple(p.type for p in self.params)


@dataclass(frozen=True)
class ClassDecl:
    name: str
    base: Optional[str]
    fields: Tuple[VarDecl, ...]
    methods: Tuple[MethodDecl, ...]
    location: Optional[SourceLocation] = _loc()

    def method(self, name: str) -> Optional[MethodDecl]:
        for m in self.methods:
            if m.name == name:
                return m
        return None


@dataclass(frozen=True)
class Program:
    classes: Tuple[ClassDecl, ...]
    location: Optional[SourceLocation] = _loc()

    def class_named(self, name: str) -> Optional[ClassDecl]:
        for c in self.classes:
            if c.name == name:
                return c
        return None


# ---------- traversal helpers ----------

def sub_bodies(s: Statement) -> Tuple[Tuple[Statement, ...], ...]:
    """Nested statement sequences of a statement, in source order."""
    if isinstance(s, If):
        return tuple(b for b in (s.then_body, s.else_body) if b is not None)
    if isinstance(s, Loop):
        return tuple(b for b in (s.do_body, s.loop_body) if b is not None)
    if isinstance(s, (ObjectBlock, LocalBlock, ConstructorBlock, Reversal)):
        return (s.body,)
    return ()


def expressions_of(s: Statement) -> Tuple[Expression, ...]:
    if isinstance(s, Assign):
        return (s.expr,)
    if isinstance(s, If):
        return (s.test, s.assertion)
    if isinstance(s, Loop):
        return (s.entry, s.exit)
    if isinstance(s, LocalBlock):
        return (s.init, s.exit)
    if isinstance(s, (ExpressionCall, Reversal)):
        return s.args
    if isinstance(s, ConstructorBlock):
        return s.args + s.exit_args
    return ()


def walk_statements(body: Tuple[Statement, ...]) -> Iterator[Statement]:
    for s in body:
        yield s
        for inner in sub_bodies(s):
            yield from walk_statements(inner)


def walk_expression(e: Expression) -> Iterator[Expression]:
    yield e
    if isinstance(e, Binary):
        yield from walk_expression(e.left)
        yield from walk_expression(e.right)


def expression_size(e: Expression) -> int:
    return sum(1 for _ in walk_expression(e))


def statement_size(s: Statement) -> int:
    """Node count of a statement including its expressions."""
    total = 1 + sum(expression_size(e) for e in expressions_of(s))
    for inner in sub_bodies(s):
        total += body_size(inner)
    return total


def body_size(body: Tuple[Statement, ...]) -> int:
    return sum(statement_size(s) for s in body)


def statement_identifiers(s: Statement) -> Iterator[str]:
    if isinstance(s, Assign):
        yield s.target
    elif isinstance(s, Swap):
        yield s.left
        yield s.right
    elif isinstance(s, (ObjectBlock, ConstructorBlock)):
        yield s.class_name
        yield s.var
    elif isinstance(s, LocalBlock):
        yield s.var
    elif isinstance(s, (LocalCall, LocalUncall)):
        yield s.method
        yield from s.args
    elif isinstance(s, (ObjectCall, ObjectUncall)):
        yield s.callee
        yield s.method
        yield from s.args
    elif isinstance(s, (ExpressionCall, Reversal)):
        if s.callee:
            yield s.callee
        yield s.method
    for e in expressions_of(s):
        for node in walk_expression(e):
            if isinstance(node, Variable):
                yield node.name


def program_identifiers(program: Program) -> set:
    """Every class, method, field, parameter and variable name of a program."""
    names = set()
    for c in program.classes:
        names.add(c.name)
        if c.base:
            names.add(c.base)
        names.update(f.name for f in c.fields)
        for m in c.methods:
            names.add(m.name)
            names.update(p.name for p in m.params)
            names.update(p.type for p in m.params)
            for s in walk_statements(m.body):
                names.update(statement_identifiers(s))
    return names

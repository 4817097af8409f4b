"""
Pretty-printer: renders surface or core ASTs as ROOPL source that parses back
to a structurally equal tree.
"""
from typing import List, Optional, Sequence, Tuple

from src.core import ast
from src.core.constants import FRESH_PREFIX

INDENT = "    "


def format_expression(e: ast.Expression, parent_precedence: int = 0) -> str:
    if isinstance(e, ast.Constant):
        if e.value < 0:
            # literals are non-negative; the source spelling 0 - n parses as a subtraction
            raise ValueError(f"constant {e.value} has no literal form")
        return str(e.value)
    if isinstance(e, ast.Variable):
        return e.name
    if isinstance(e, ast.Nil):
        return "nil"
    prec = e.op.precedence
    # left-associative: a right operand of equal precedence needs parentheses
    text = f"{format_expression(e.left, prec)} {e.op.value} {format_expression(e.right, prec + 1)}"
    if prec < parent_precedence:
        return f"({text})"
    return text


def _args(args: Sequence) -> str:
    return ", ".join(a if isinstance(a, str) else format_expression(a) for a in args)


def _target(callee: Optional[str], method: str, args: Sequence) -> str:
    prefix = f"{callee}::" if callee else ""
    return f"{prefix}{method}({_args(args)})"


def _resugar(block: ast.LocalBlock):
    """Recover ``call q(.., e, ..)`` from the local blocks desugaring introduced."""
    substitutions = {}
    node: ast.Statement = block
    while (isinstance(node, ast.LocalBlock) and node.var.startswith(FRESH_PREFIX)
           and node.init == node.exit and len(node.body) == 1):
        substitutions[node.var] = node.init
        node = node.body[0]
    if not isinstance(node, ast.INVOCATIONS) or not substitutions:
        return None
    if not set(substitutions) <= set(node.args):
        return None
    args = tuple(substitutions.get(a, ast.Variable(a)) for a in node.args)
    callee = getattr(node, "callee", None)
    uncall = isinstance(node, (ast.LocalUncall, ast.ObjectUncall))
    return ast.ExpressionCall(uncall, callee, node.method, args, block.location)


class Printer:
    def __init__(self):
        self.lines: List[str] = []

    def emit(self, depth: int, text: str) -> None:
        self.lines.append(f"{INDENT * depth}{text}")

    def body(self, statements: Sequence[ast.Statement], depth: int) -> None:
        for s in statements:
            self.statement(s, depth)

    def statement(self, s: ast.Statement, depth: int) -> None:
        if isinstance(s, ast.Assign):
            self.emit(depth, f"{s.target} {s.op.value} {format_expression(s.expr)}")
        elif isinstance(s, ast.Swap):
            self.emit(depth, f"{s.left} <=> {s.right}")
        elif isinstance(s, ast.Skip):
            self.emit(depth, "skip")
        elif isinstance(s, ast.If):
            self.emit(depth, f"if {format_expression(s.test)} then")
            self.body(s.then_body, depth + 1)
            if s.else_body is not None:
                self.emit(depth, "else")
                self.body(s.else_body, depth + 1)
            self.emit(depth, f"fi {format_expression(s.assertion)}")
        elif isinstance(s, ast.Loop):
            self.emit(depth, f"from {format_expression(s.entry)}")
            if s.do_body is not None:
                self.emit(depth, "do")
                self.body(s.do_body, depth + 1)
            if s.loop_body is not None:
                self.emit(depth, "loop")
                self.body(s.loop_body, depth + 1)
            self.emit(depth, f"until {format_expression(s.exit)}")
        elif isinstance(s, ast.ObjectBlock):
            self.emit(depth, f"construct {s.class_name} {s.var}")
            self.body(s.body, depth + 1)
            self.emit(depth, f"destruct {s.var}")
        elif isinstance(s, ast.ConstructorBlock):
            self.emit(depth, f"construct {s.class_name} {s.var}({_args(s.args)})")
            self.body(s.body, depth + 1)
            self.emit(depth, f"destruct {s.var}({_args(s.exit_args)})")
        elif isinstance(s, ast.LocalBlock):
            call = _resugar(s)
            if call is not None:
                self.statement(call, depth)
                return
            self.emit(depth, f"local int {s.var} = {format_expression(s.init)}")
            self.body(s.body, depth + 1)
            self.emit(depth, f"delocal int {s.var} = {format_expression(s.exit)}")
        elif isinstance(s, (ast.LocalCall, ast.ObjectCall)):
            self.emit(depth, f"call {_target(getattr(s, 'callee', None), s.method, s.args)}")
        elif isinstance(s, (ast.LocalUncall, ast.ObjectUncall)):
            self.emit(depth, f"uncall {_target(getattr(s, 'callee', None), s.method, s.args)}")
        elif isinstance(s, ast.ExpressionCall):
            keyword = "uncall" if s.uncall else "call"
            self.emit(depth, f"{keyword} {_target(s.callee, s.method, s.args)}")
        elif isinstance(s, ast.Reversal):
            self.emit(depth, f"reversal {_target(s.callee, s.method, s.args)}")
            self.body(s.body, depth + 1)
        else:
            raise TypeError(f"cannot print {type(s).__name__}")

    def method(self, m: ast.MethodDecl) -> None:
        params = ", ".join(f"{p.type} {p.name}" for p in m.params)
        self.emit(1, f"method {m.name}({params})")
        self.body(m.body, 2)

    def klass(self, c: ast.ClassDecl) -> None:
        header = f"class {c.name}" + (f" inherits {c.base}" if c.base else "")
        self.emit(0, header)
        for f in c.fields:
            self.emit(1, f"{f.type} {f.name}")
        for m in c.methods:
            self.emit(0, "")
            self.method(m)


def format_statements(statements: Sequence[ast.Statement], depth: int = 0) -> str:
    printer = Printer()
    printer.body(statements, depth)
    return "\n".join(printer.lines) + "\n"


def format_program(program: ast.Program) -> str:
    """Render a whole program; classes are separated by a blank line."""
    printer = Printer()
    for index, c in enumerate(program.classes):
        if index:
            printer.emit(0, "")
        printer.klass(c)
    return "\n".join(printer.lines) + "\n"

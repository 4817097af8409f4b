"""
Parser for ROOPL: feeds a token list to the LALR parser and transforms the
resulting parse tree into the surface AST of ``src.core.ast``.
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

from lark import Token as LarkToken
from lark import Transformer, v_args
from lark.exceptions import UnexpectedInput, UnexpectedToken, VisitError

from src.core import ast
from src.core.constants import BinaryOperator, ModOp
from src.core.errors import ParseError, RooplError
from src.core.location import SourceLocation

from .lexer import Token, grammar_parser, tokenize

logger = logging.getLogger(__name__)

_FRIENDLY_TERMINALS = {
    "NAME": "identifier",
    "NUMBER": "integer literal",
    "$END": "end of input",
}


def _location(meta) -> Optional[SourceLocation]:
    if getattr(meta, "empty", True):
        return None
    return SourceLocation(meta.line, meta.column)


def _token_location(tok: LarkToken) -> SourceLocation:
    return SourceLocation(tok.line, tok.column)


class _Marker:
    """Tagged intermediate value for optional grammar parts."""

    def __init__(self, tag: str, value=None):
        self.tag = tag
        self.value = value


def _is_punct(child) -> bool:
    return isinstance(child, LarkToken) and child.type in ("LPAR", "RPAR", "COMMA", "DCOLON")


@v_args(meta=True)
class RooplTransformer(Transformer):
    """Builds AST nodes bottom-up from the parse tree."""

    # ---- declarations ----

    def start(self, meta, children):
        return ast.Program(tuple(children), _location(meta))

    def inherits(self, meta, children):
        return _Marker("base", str(children[0]))

    def int_type(self, meta, children):
        return ast.INT_TYPE

    def class_type(self, meta, children):
        return str(children[0])

    def field_decl(self, meta, children):
        type_name, name = children
        return ast.VarDecl(type_name, str(name), _token_location(name))

    def param(self, meta, children):
        type_name, name = children
        return ast.VarDecl(type_name, str(name), _token_location(name))

    def params(self, meta, children):
        return _Marker("params", tuple(c for c in children if not _is_punct(c)))

    def method_decl(self, meta, children):
        name = children[0]
        params: Tuple[ast.VarDecl, ...] = ()
        body = children[-1]
        for child in children[1:-1]:
            if isinstance(child, _Marker) and child.tag == "params":
                params = child.value
        return ast.MethodDecl(str(name), params, body, _location(meta))

    def class_decl(self, meta, children):
        name = str(children[0])
        base = None
        fields: List[ast.VarDecl] = []
        methods: List[ast.MethodDecl] = []
        for child in children[1:]:
            if isinstance(child, _Marker):
                base = child.value
            elif isinstance(child, ast.VarDecl):
                fields.append(child)
            else:
                methods.append(child)
        return ast.ClassDecl(name, base, tuple(fields), tuple(methods), _location(meta))

    # ---- statements ----

    def stmts(self, meta, children):
        return tuple(children)

    def assign(self, meta, children):
        target, op, expr = children
        return ast.Assign(str(target), ModOp(str(op)), expr, _location(meta))

    def swap(self, meta, children):
        left, _, right = children
        return ast.Swap(str(left), str(right), _location(meta))

    def else_part(self, meta, children):
        return _Marker("else", children[0])

    def if_stmt(self, meta, children):
        test, then_body = children[0], children[1]
        else_body = None
        if len(children) == 4:
            else_body = children[2].value
        return ast.If(test, then_body, else_body, children[-1], _location(meta))

    def do_part(self, meta, children):
        return _Marker("do", children[0])

    def loop_part(self, meta, children):
        return _Marker("loop", children[0])

    def from_stmt(self, meta, children):
        parts = {c.tag: c.value for c in children[1:-1]}
        return ast.Loop(children[0], parts.get("do"), parts.get("loop"), children[-1], _location(meta))

    def ctor_args(self, meta, children):
        args = [c for c in children if not _is_punct(c)]
        return _Marker("args", args[0] if args else ())

    def construct_stmt(self, meta, children):
        class_name, var = str(children[0]), children[1]
        rest = list(children[2:])
        args = rest.pop(0).value if isinstance(rest[0], _Marker) else None
        body = rest.pop(0)
        exit_var = rest.pop(0)
        exit_args = rest.pop(0).value if rest else None
        if str(exit_var) != str(var):
            raise ParseError(
                f"destruct names '{exit_var}' but the block constructs '{var}'",
                _token_location(exit_var),
            )
        loc = _location(meta)
        if args is None and exit_args is None:
            return ast.ObjectBlock(class_name, str(var), body, loc)
        return ast.ConstructorBlock(class_name, str(var), tuple(args or ()), body, tuple(exit_args or ()), loc)

    def binding(self, meta, children):
        name, _, expr = children
        return (str(name), expr, _token_location(name))

    def bindings(self, meta, children):
        return _Marker("bindings", [c for c in children if not _is_punct(c)])

    def delocal_type(self, meta, children):
        return _Marker("type")

    def local_stmt(self, meta, children):
        entries = children[0].value
        body = children[1]
        exits = [c for c in children[2:] if c.tag == "bindings"][0].value
        declared = [name for name, _, _ in entries]
        if len(set(declared)) != len(declared):
            raise ParseError("duplicate variable in local declaration", entries[0][2])
        exit_by_name: Dict[str, ast.Expression] = {}
        for name, expr, loc in exits:
            if name not in declared or name in exit_by_name:
                raise ParseError(f"delocal of '{name}' does not match the local declaration", loc)
            exit_by_name[name] = expr
        missing = [n for n in declared if n not in exit_by_name]
        if missing:
            raise ParseError(f"missing delocal for '{missing[0]}'", _location(meta))
        # innermost block is the last declarator
        block: Tuple = body
        for name, init, loc in reversed(entries):
            block = (ast.LocalBlock(name, init, block, exit_by_name[name], loc),)
        return block[0]

    def local_invocation(self, meta, children):
        parts = [c for c in children if not _is_punct(c)]
        args = parts[1] if len(parts) > 1 else ()
        return (None, str(parts[0]), tuple(args))

    def object_invocation(self, meta, children):
        parts = [c for c in children if not _is_punct(c)]
        args = parts[2] if len(parts) > 2 else ()
        return (str(parts[0]), str(parts[1]), tuple(args))

    def arguments(self, meta, children):
        return tuple(c for c in children if not _is_punct(c))

    def _invocation(self, uncall: bool, invocation, loc):
        callee, method, args = invocation
        if not all(isinstance(a, ast.Variable) for a in args):
            return ast.ExpressionCall(uncall, callee, method, args, loc)
        names = tuple(a.name for a in args)
        if callee is None:
            node = ast.LocalUncall if uncall else ast.LocalCall
            return node(method, names, loc)
        node = ast.ObjectUncall if uncall else ast.ObjectCall
        return node(callee, method, names, loc)

    def call_stmt(self, meta, children):
        return self._invocation(False, children[0], _location(meta))

    def uncall_stmt(self, meta, children):
        return self._invocation(True, children[0], _location(meta))

    def reversal_stmt(self, meta, children):
        (callee, method, args), statement = children
        return ast.Reversal(callee, method, tuple(args), (statement,), _location(meta))

    def skip_stmt(self, meta, children):
        return ast.Skip(_location(meta))

    # ---- expressions ----

    def binary(self, meta, children):
        left, op, right = children
        return ast.Binary(BinaryOperator(str(op)), left, right, _location(meta))

    def constant(self, meta, children):
        tok = children[0]
        return ast.Constant(int(tok), _token_location(tok))

    def variable(self, meta, children):
        tok = children[0]
        return ast.Variable(str(tok), _token_location(tok))

    def nil(self, meta, children):
        return ast.Nil(_location(meta))

    def paren(self, meta, children):
        return [c for c in children if not _is_punct(c)][0]


def _describe_expected(expected: Sequence[str]) -> List[str]:
    terminals = {t.name: t for t in grammar_parser().terminals}
    described = []
    for name in expected:
        if name in _FRIENDLY_TERMINALS:
            described.append(_FRIENDLY_TERMINALS[name])
        elif name in terminals:
            described.append(f"'{terminals[name].pattern.value}'")
        else:
            described.append(name)
    return described


def parse_program(tokens: Sequence[Token]) -> ast.Program:
    """
    Construye el AST (antes de desazucarar) a partir de los tokens.

    Args:
        tokens: salida de tokenize
    Returns:
        Program con las formas extendidas intactas
    """
    interactive = grammar_parser().parse_interactive()
    last: Optional[LarkToken] = None
    try:
        for tok in tokens:
            last = LarkToken(tok.terminal, tok.lexeme, line=tok.line, column=tok.column,
                             end_line=tok.line, end_column=tok.column + len(tok.lexeme))
            interactive.feed_token(last)
        tree = interactive.feed_eof(last)
    except UnexpectedToken as exc:
        tok = exc.token
        if tok.type == "$END":
            where = SourceLocation(last.line, last.column) if last is not None else SourceLocation(1, 1)
            found = "end of input"
        else:
            where = SourceLocation(tok.line, tok.column)
            found = f"'{tok}'"
        raise ParseError(f"unexpected {found}", where, _describe_expected(exc.expected))
    except UnexpectedInput as exc:
        raise ParseError(str(exc).splitlines()[0], SourceLocation(exc.line, exc.column))

    try:
        program = RooplTransformer().transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, RooplError):
            raise exc.orig_exc
        raise
    logger.info(f"Parsed {len(program.classes)} classes")
    return program


def parse_source(source: str) -> ast.Program:
    """Tokenize and parse in one step."""
    return parse_program(tokenize(source))

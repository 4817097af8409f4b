from .desugar import desugar
from .lexer import Token, TokenKind, tokenize
from .parser import parse_program, parse_source
from .printer import format_expression, format_program, format_statements

__all__ = [
    "Token", "TokenKind", "tokenize", "parse_program", "parse_source", "desugar",
    "format_expression", "format_program", "format_statements",
]

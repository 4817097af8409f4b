"""
Tokenizer for ROOPL source text, driven by the terminals of ``roopl.lark``.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import List

from lark import Lark
from lark.exceptions import UnexpectedCharacters

from src.core.constants import KEYWORDS, WORD_MAX
from src.core.errors import LexError
from src.core.location import SourceLocation

logger = logging.getLogger(__name__)

GRAMMAR_PATH = Path(__file__).with_name("roopl.lark")

PUNCTUATION_TERMINALS = frozenset({"LPAR", "RPAR", "COMMA", "DCOLON"})


class TokenKind(Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    INTEGER = "integer-literal"
    OPERATOR = "operator"
    PUNCTUATION = "punctuation"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    line: int
    column: int
    terminal: str

    @property
    def location(self) -> SourceLocation:
        return SourceLocation(self.line, self.column)

    def __str__(self) -> str:
        return f"{self.kind.value} {self.lexeme}"


@lru_cache(maxsize=None)
def grammar_parser() -> Lark:
    """Singleton LALR parser built from the bundled grammar."""
    return Lark(
        GRAMMAR_PATH.read_text(encoding="utf-8"),
        parser="lalr",
        lexer="basic",
        propagate_positions=True,
        maybe_placeholders=False,
    )


def _kind_of(terminal: str, lexeme: str) -> TokenKind:
    if terminal == "NAME":
        return TokenKind.IDENTIFIER
    if terminal == "NUMBER":
        return TokenKind.INTEGER
    if terminal in PUNCTUATION_TERMINALS:
        return TokenKind.PUNCTUATION
    if lexeme in KEYWORDS:
        return TokenKind.KEYWORD
    return TokenKind.OPERATOR


def tokenize(source: str) -> List[Token]:
    """
    Convierte el texto fuente en una lista de tokens.

    Args:
        source: texto del programa ROOPL
    Returns:
        Tokens en orden, sin espacios ni comentarios
    """
    tokens: List[Token] = []
    try:
        for raw in grammar_parser().lex(source):
            lexeme = str(raw)
            kind = _kind_of(raw.type, lexeme)
            if kind is TokenKind.INTEGER and int(lexeme) > WORD_MAX:
                raise LexError(
                    f"integer literal {lexeme} does not fit in 32 bits",
                    SourceLocation(raw.line, raw.column),
                )
            tokens.append(Token(kind, lexeme, raw.line, raw.column, raw.type))
    except UnexpectedCharacters as exc:
        char = source[exc.pos_in_stream] if exc.pos_in_stream < len(source) else "?"
        raise LexError(f"illegal character {char!r}", SourceLocation(exc.line, exc.column))
    logger.debug(f"Tokenized {len(tokens)} tokens")
    return tokens

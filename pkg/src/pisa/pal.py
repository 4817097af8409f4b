"""
PAL text format: one instruction per line, optional ``label:`` prefix,
registers written ``$n`` (``rn`` accepted on input), decimal immediates,
``;`` comments.
"""
import logging
import re
from typing import List, Optional, Sequence

from src.core.constants import REGISTER_COUNT, Opcode
from src.core.errors import BadRegister, PalSyntaxError, UnknownMnemonic
from src.core.location import SourceLocation
from src.utils.words import fits_word

from .instructions import Instruction, Operand

logger = logging.getLogger(__name__)

LABEL_PATTERN = r"[A-Za-z_.][A-Za-z0-9_.]*"
_LABEL_PREFIX = re.compile(rf"^\s*({LABEL_PATTERN})\s*:(.*)$")
_REGISTER = re.compile(r"^(?:\$|r)(\d+)$")
_IMMEDIATE = re.compile(r"^[+-]?\d+$")
_SYMBOL = re.compile(rf"^-?{LABEL_PATTERN}$")


def _register(text: str, line: int) -> int:
    match = _REGISTER.match(text)
    if not match or int(match.group(1)) >= REGISTER_COUNT:
        raise BadRegister(f"bad register '{text}'", SourceLocation(line, 1))
    return int(match.group(1))


def _number(text: str, line: int) -> int:
    value = int(text)
    if not fits_word(value):
        raise PalSyntaxError(f"immediate {text} does not fit in a signed 32-bit word", SourceLocation(line, 1))
    return value


def _operand(kind: str, text: str, line: int) -> Operand:
    if kind == "r":
        return _register(text, line)
    if kind == "l":
        if _IMMEDIATE.match(text):
            return _number(text, line)
        if not re.match(rf"^{LABEL_PATTERN}$", text):
            raise PalSyntaxError(f"bad label '{text}'", SourceLocation(line, 1))
        return text
    if _IMMEDIATE.match(text):
        return _number(text, line)
    if _SYMBOL.match(text):
        return text
    raise PalSyntaxError(f"bad immediate '{text}'", SourceLocation(line, 1))


def parse_pal(text: str) -> List[Instruction]:
    """
    Lee texto PAL y devuelve la lista de instrucciones etiquetadas.

    Args:
        text: programa PAL
    Returns:
        Instrucciones en orden; una etiqueta sola en su línea se une a la siguiente
    """
    instructions: List[Instruction] = []
    pending_label: Optional[str] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        body, _, comment = raw.partition(";")
        comment = comment.strip() or None
        label = None
        match = _LABEL_PREFIX.match(body)
        if match:
            label, body = match.group(1), match.group(2)
        if label is not None and pending_label is not None:
            raise PalSyntaxError(f"two labels for one instruction: '{pending_label}', '{label}'",
                                 SourceLocation(number, 1))
        label = label or pending_label
        words = body.replace(",", " ").split()
        if not words:
            pending_label = label
            continue
        pending_label = None
        mnemonic = words[0].upper()
        try:
            opcode = Opcode.from_mnemonic(mnemonic)
        except KeyError:
            raise UnknownMnemonic(f"unknown mnemonic '{words[0]}'", SourceLocation(number, 1))
        args = words[1:]
        if len(args) != len(opcode.operands):
            raise PalSyntaxError(
                f"{mnemonic} takes {len(opcode.operands)} operands, got {len(args)}", SourceLocation(number, 1))
        operands = tuple(_operand(kind, arg, number) for kind, arg in zip(opcode.operands, args))
        instructions.append(Instruction(opcode, operands, label, comment))
    if pending_label is not None:
        raise PalSyntaxError(f"label '{pending_label}' has no instruction", SourceLocation(len(text.splitlines()), 1))
    logger.debug(f"Parsed {len(instructions)} PAL instructions")
    return instructions


def _format_operand(kind: str, value: Operand) -> str:
    if kind == "r":
        return f"${value}"
    return str(value)


def format_instruction(instruction: Instruction) -> str:
    operands = " ".join(_format_operand(kind, value)
                        for kind, value in zip(instruction.opcode.operands, instruction.operands))
    text = f"{instruction.opcode.mnemonic} {operands}".rstrip()
    prefix = f"{instruction.label}:" if instruction.label else ""
    line = f"{prefix:<23} {text}"
    if instruction.comment:
        line = f"{line:<48}; {instruction.comment}"
    return line.rstrip()


def emit_pal(instructions: Sequence[Instruction]) -> str:
    return "\n".join(format_instruction(i) for i in instructions) + "\n"

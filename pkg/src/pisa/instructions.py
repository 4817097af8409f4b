"""
PISA instructions as data.

Operands are ints (register numbers, immediates, resolved branch offsets) or
strings. A string in a branch position names the target label; a string in an
immediate position is a symbolic address (``"l_out"`` or ``"-l_out"``) that
the resolver replaces with the label's absolute address.
"""
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple, Union

from src.core.constants import Opcode

Operand = Union[int, str]

_INVERSE_OPCODES = {
    Opcode.ADD: Opcode.SUB,
    Opcode.SUB: Opcode.ADD,
    Opcode.RL: Opcode.RR,
    Opcode.RR: Opcode.RL,
    Opcode.RLV: Opcode.RRV,
    Opcode.RRV: Opcode.RLV,
}


@dataclass(frozen=True)
class Instruction:
    opcode: Opcode
    operands: Tuple[Operand, ...] = ()
    label: Optional[str] = None
    comment: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.operands) != len(self.opcode.operands):
            raise ValueError(f"{self.opcode.mnemonic} takes {len(self.opcode.operands)} operands, "
                             f"got {len(self.operands)}")

    @property
    def target(self) -> Operand:
        """Branch target (label before resolution, offset after)."""
        return self.operands[-1]

    def with_label(self, label: Optional[str]) -> "Instruction":
        return replace(self, label=label)

    def with_operands(self, *operands: Operand) -> "Instruction":
        return replace(self, operands=tuple(operands))

    def __str__(self) -> str:
        from .pal import format_instruction
        return format_instruction(self)


def negate_immediate(value: Operand) -> Operand:
    if isinstance(value, int):
        return -value
    return value[1:] if value.startswith("-") else f"-{value}"


def invert_instruction(instruction: Instruction) -> Instruction:
    """
    Inversa de una instrucción: ADD<->SUB, ADDI c -> ADDI -c, RL<->RR, RLV<->RRV.

    Args:
        instruction: instrucción PISA
    Returns:
        La instrucción inversa (las demás son autoinversas)
    """
    if instruction.opcode is Opcode.ADDI:
        register, immediate = instruction.operands
        return instruction.with_operands(register, negate_immediate(immediate))
    inverse = _INVERSE_OPCODES.get(instruction.opcode)
    if inverse is None:
        return instruction
    return replace(instruction, opcode=inverse)


# ---- constructors used by the code generator ----

def make(opcode: Opcode, *operands: Operand, label: Optional[str] = None,
         comment: Optional[str] = None) -> Instruction:
    return Instruction(opcode, tuple(operands), label, comment)


def push(register: int, sp: int = 1) -> List[Instruction]:
    """PUSH r = EXCH r sp; ADDI sp 1"""
    return [make(Opcode.EXCH, register, sp), make(Opcode.ADDI, sp, 1)]


def pop(register: int, sp: int = 1) -> List[Instruction]:
    """POP r = ADDI sp -1; EXCH r sp"""
    return [make(Opcode.ADDI, sp, -1), make(Opcode.EXCH, register, sp)]

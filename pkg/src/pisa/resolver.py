"""
Label resolution: branch labels become relative offsets and symbolic
immediates become absolute addresses (one word per instruction, from 0).
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

from src.core.constants import Opcode
from src.core.errors import DuplicateLabel, FinishBeforeStart, UndefinedLabel

from .instructions import Instruction, Operand

logger = logging.getLogger(__name__)


@dataclass
class MachineProgram:
    instructions: List[Instruction]
    labels: Dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.instructions)

    def address_of(self, label: str) -> int:
        return self.labels[label]


def label_addresses(instructions: Sequence[Instruction]) -> Dict[str, int]:
    labels: Dict[str, int] = {}
    for address, instruction in enumerate(instructions):
        if instruction.label is None:
            continue
        if instruction.label in labels:
            raise DuplicateLabel(f"label '{instruction.label}' is defined more than once")
        labels[instruction.label] = address
    return labels


def _check_order(instructions: Sequence[Instruction]) -> None:
    starts = [a for a, i in enumerate(instructions) if i.opcode is Opcode.START]
    finishes = [a for a, i in enumerate(instructions) if i.opcode is Opcode.FINISH]
    # a missing START is reported when the program is loaded
    if starts and finishes and finishes[0] < starts[0]:
        raise FinishBeforeStart(f"FINISH at address {finishes[0]} precedes START at address {starts[0]}")


def _lookup(labels: Dict[str, int], name: str) -> int:
    if name not in labels:
        raise UndefinedLabel(f"undefined label '{name}'")
    return labels[name]


def resolve_immediate(labels: Dict[str, int], value: Operand) -> int:
    if isinstance(value, int):
        return value
    if value.startswith("-"):
        return -_lookup(labels, value[1:])
    return _lookup(labels, value)


def resolve(instructions: Sequence[Instruction]) -> MachineProgram:
    """
    Resuelve etiquetas a desplazamientos relativos.

    Args:
        instructions: lista etiquetada (salida de parse_pal o del generador)
    Returns:
        MachineProgram con offsets = dirección(destino) - dirección(salto)
    """
    labels = label_addresses(instructions)
    _check_order(instructions)
    resolved: List[Instruction] = []
    for address, instruction in enumerate(instructions):
        kinds = instruction.opcode.operands
        operands = list(instruction.operands)
        for index, kind in enumerate(kinds):
            value = operands[index]
            if kind == "l" and isinstance(value, str):
                operands[index] = _lookup(labels, value) - address
            elif kind == "c":
                operands[index] = resolve_immediate(labels, value)
        resolved.append(instruction.with_operands(*operands))
    logger.debug(f"Resolved {len(resolved)} instructions, {len(labels)} labels")
    return MachineProgram(resolved, labels)


def patch_immediates(instructions: Sequence[Instruction]) -> List[Instruction]:
    """Replace symbolic immediates by addresses, leaving branch labels symbolic."""
    labels = label_addresses(instructions)
    patched = []
    for instruction in instructions:
        if "c" in instruction.opcode.operands and any(isinstance(v, str) for v in instruction.operands):
            operands = [resolve_immediate(labels, v) if k == "c" else v
                        for k, v in zip(instruction.opcode.operands, instruction.operands)]
            instruction = instruction.with_operands(*operands)
        patched.append(instruction)
    return patched


def count_starts(instructions: Sequence[Instruction]) -> int:
    return sum(1 for i in instructions if i.opcode is Opcode.START)

"""
Bidirectional PISA virtual machine.

Control flow follows the branch-register discipline: a taken branch adds its
offset (times DIR) to BR and the program counter moves by ``DIR * BR`` when
BR is non-zero, by ``DIR`` otherwise. Running with DIR = -1 executes the
inverse of every non-branch instruction.

``step``, ``run`` and ``reverse_run`` update the state in place and return it.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from src.core import config
from src.core.constants import REGISTER_COUNT, Opcode
from src.core.errors import LoadError, MachineError, StepLimitExceeded
from src.pisa.instructions import Instruction, invert_instruction
from src.pisa.resolver import MachineProgram
from src.utils.words import (new_memory, rotate_left, rotate_right, shift_left, shift_right_arithmetic,
                             shift_right_logical, to_word)

logger = logging.getLogger(__name__)
trace_logger = logging.getLogger(f"{__name__}.trace")


@dataclass
class MachineState:
    program: MachineProgram
    memory: np.ndarray
    registers: List[int] = field(default_factory=lambda: [0] * REGISTER_COUNT)
    pc: int = 0
    br: int = 0
    dir: int = 1
    halted: bool = False
    steps: int = 0
    trace: bool = False

    def copy(self) -> "MachineState":
        return MachineState(self.program, self.memory.copy(), list(self.registers), self.pc, self.br,
                            self.dir, self.halted, self.steps, self.trace)

    def same_as(self, other: "MachineState") -> bool:
        """Full state equality ignoring the step counter."""
        return (self.registers == other.registers and np.array_equal(self.memory, other.memory)
                and (self.pc, self.br, self.dir, self.halted) == (other.pc, other.br, other.dir, other.halted))

    @property
    def trapped(self) -> bool:
        """Register 2 is left non-zero only by the runtime-check error handler."""
        return self.halted and self.registers[2] != 0

    def dump_memory(self, start: int, end: int) -> List[str]:
        end = min(end, len(self.memory))
        return [f"{address}: {int(self.memory[address])}" for address in range(start, end)]

    def to_dict(self) -> dict:
        return {
            "pc": self.pc, "br": self.br, "dir": self.dir, "halted": self.halted,
            "steps": self.steps, "registers": list(self.registers),
        }


def load(program: MachineProgram, memory_size: Optional[int] = None, trace: bool = False) -> MachineState:
    """
    Carga el programa en una máquina nueva.

    Args:
        program: programa resuelto
        memory_size: palabras de memoria (por defecto la configuración)
    Returns:
        Estado con PC en START, BR=0, DIR=+1 y las palabras DATA en memoria
    """
    size = config.validate_memory_size(memory_size or config.get_memory_size())
    if len(program) > size:
        raise LoadError(f"program of {len(program)} words does not fit in {size} words of memory")
    starts = [address for address, i in enumerate(program.instructions) if i.opcode is Opcode.START]
    if not starts:
        raise LoadError("program has no START instruction")
    if len(starts) > 1:
        raise LoadError(f"program has {len(starts)} START instructions")
    memory = new_memory(size)
    for address, instruction in enumerate(program.instructions):
        if instruction.opcode is Opcode.DATA:
            memory[address] = to_word(instruction.operands[0])
    logger.info(f"Loaded {len(program)} words, START at {starts[0]}")
    return MachineState(program, memory, pc=starts[0], trace=trace)


# ---- instruction semantics ----

def _write(state: MachineState, register: int, value: int) -> None:
    if register == 0:
        raise MachineError("write to register $0", state)
    state.registers[register] = to_word(value)


def _distinct(state: MachineState, instruction: Instruction, *registers: int) -> None:
    if len(set(registers)) != len(registers):
        raise MachineError(f"'{instruction}' uses the same register twice", state)


def _xform(compute: Callable[[List[int], tuple], int]):
    def execute(state: MachineState, instruction: Instruction) -> None:
        ops = instruction.operands
        kinds = instruction.opcode.operands
        _distinct(state, instruction, *[v for k, v in zip(kinds, ops) if k == "r"])
        rd = ops[0]
        _write(state, rd, state.registers[rd] ^ compute(state.registers, ops))
    return execute


def _exch(state: MachineState, instruction: Instruction) -> None:
    register, address_register = instruction.operands
    _distinct(state, instruction, register, address_register)
    address = state.registers[address_register]
    if not 0 <= address < len(state.memory):
        raise MachineError(f"EXCH address {address} outside memory", state)
    value = int(state.memory[address])
    state.memory[address] = to_word(state.registers[register])
    _write(state, register, value)


def _two_registers(compute: Callable[[int, int], int]):
    def execute(state: MachineState, instruction: Instruction) -> None:
        rd, rs = instruction.operands
        _distinct(state, instruction, rd, rs)
        _write(state, rd, compute(state.registers[rd], state.registers[rs]))
    return execute


def _immediate(compute: Callable[[int, int], int]):
    def execute(state: MachineState, instruction: Instruction) -> None:
        rd, c = instruction.operands
        _write(state, rd, compute(state.registers[rd], c))
    return execute


def _neg(state: MachineState, instruction: Instruction) -> None:
    (rd,) = instruction.operands
    _write(state, rd, -state.registers[rd])


def _data(state: MachineState, instruction: Instruction) -> None:
    raise MachineError(f"attempt to execute DATA word at address {state.pc}", state)


_OPERATIONS: Dict[Opcode, Callable[[MachineState, Instruction], None]] = {
    Opcode.ADD: _two_registers(lambda a, b: a + b),
    Opcode.SUB: _two_registers(lambda a, b: a - b),
    Opcode.XOR: _two_registers(lambda a, b: a ^ b),
    Opcode.RLV: _two_registers(rotate_left),
    Opcode.RRV: _two_registers(rotate_right),
    Opcode.ADDI: _immediate(lambda a, c: a + c),
    Opcode.XORI: _immediate(lambda a, c: a ^ c),
    Opcode.RL: _immediate(rotate_left),
    Opcode.RR: _immediate(rotate_right),
    Opcode.NEG: _neg,
    Opcode.ANDX: _xform(lambda r, o: r[o[1]] & r[o[2]]),
    Opcode.ANDIX: _xform(lambda r, o: r[o[1]] & o[2]),
    Opcode.NORX: _xform(lambda r, o: ~(r[o[1]] | r[o[2]])),
    Opcode.ORX: _xform(lambda r, o: r[o[1]] | r[o[2]]),
    Opcode.ORIX: _xform(lambda r, o: r[o[1]] | o[2]),
    Opcode.SLLX: _xform(lambda r, o: shift_left(r[o[1]], o[2])),
    Opcode.SLLVX: _xform(lambda r, o: shift_left(r[o[1]], r[o[2]])),
    Opcode.SRAX: _xform(lambda r, o: shift_right_arithmetic(r[o[1]], o[2])),
    Opcode.SRAVX: _xform(lambda r, o: shift_right_arithmetic(r[o[1]], r[o[2]])),
    Opcode.SRLX: _xform(lambda r, o: shift_right_logical(r[o[1]], o[2])),
    Opcode.SRLVX: _xform(lambda r, o: shift_right_logical(r[o[1]], r[o[2]])),
    Opcode.EXCH: _exch,
    Opcode.DATA: _data,
}

_CONDITIONS: Dict[Opcode, Callable[[List[int], tuple], bool]] = {
    Opcode.BEQ: lambda r, o: r[o[0]] == r[o[1]],
    Opcode.BNE: lambda r, o: r[o[0]] != r[o[1]],
    Opcode.BGEZ: lambda r, o: r[o[0]] >= 0,
    Opcode.BGTZ: lambda r, o: r[o[0]] > 0,
    Opcode.BLEZ: lambda r, o: r[o[0]] <= 0,
    Opcode.BLTZ: lambda r, o: r[o[0]] < 0,
    Opcode.BRA: lambda r, o: True,
}


def _control(state: MachineState, instruction: Instruction) -> bool:
    """Execute control-flow instructions; returns False for ordinary ones."""
    opcode = instruction.opcode
    if opcode in _CONDITIONS:
        if _CONDITIONS[opcode](state.registers, instruction.operands):
            state.br = to_word(state.br + state.dir * instruction.target)
        return True
    if opcode is Opcode.RBRA:
        # departing (BR = 0) flips first, receiving flips after
        if state.br == 0:
            state.dir = -state.dir
            state.br = to_word(state.dir * instruction.target)
        else:
            state.br = to_word(state.br + state.dir * instruction.target)
            state.dir = -state.dir
        return True
    if opcode is Opcode.SWAPBR:
        (register,) = instruction.operands
        value = state.registers[register]
        _write(state, register, state.br)
        state.br = value
        return True
    if opcode is Opcode.FINISH:
        state.halted = True
        return True
    if opcode is Opcode.START:
        if state.dir == -1:
            state.halted = True
        return True
    return False


def step(state: MachineState) -> MachineState:
    """Execute the instruction at PC and advance."""
    if state.halted:
        raise MachineError("machine is halted", state)
    if not 0 <= state.pc < len(state.program):
        raise MachineError(f"program counter {state.pc} outside the program", state)
    instruction = state.program.instructions[state.pc]
    if state.trace:
        trace_logger.debug(f"{state.pc:6d} dir={state.dir:+d} br={state.br} {instruction}")
    if not _control(state, instruction):
        if state.dir == -1:
            instruction = invert_instruction(instruction)
        _OPERATIONS[instruction.opcode](state, instruction)
    state.steps += 1
    if not state.halted:
        state.pc += state.dir * state.br if state.br != 0 else state.dir
    return state


def run(state: MachineState, step_limit: Optional[int] = None) -> MachineState:
    """
    Ejecuta hasta detenerse o agotar el límite de pasos.

    Args:
        state: estado cargado
        step_limit: máximo de instrucciones en esta ejecución
    Returns:
        El estado final (el mismo objeto)
    """
    limit = config.validate_step_limit(step_limit or config.get_step_limit())
    budget = state.steps + limit
    while not state.halted:
        if state.steps >= budget:
            raise StepLimitExceeded(f"step limit of {limit} exceeded at pc {state.pc}", state)
        step(state)
    logger.info(f"VM halted after {state.steps} steps at pc {state.pc}")
    return state


def reverse_run(state: MachineState, step_limit: Optional[int] = None) -> MachineState:
    """Run backwards from a halted (or arbitrary) state until START."""
    state.dir = -1
    if state.halted:
        state.halted = False
        state.pc += state.dir
    run(state, step_limit)
    # back at START: restore the freshly loaded shape
    state.dir = 1
    state.halted = False
    return state

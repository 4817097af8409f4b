"""
Compile-and-simulate backend.

The program is compiled to PISA, resolved, loaded and run; the output map is
read back from the static ``l_out.<field>`` cells. A halted machine with a
non-zero r2 went through the error handler and is reported as a runtime
check trap.
"""
import logging
from typing import Dict, Optional

from src.analysis import build_class_model
from src.codegen import compile_program
from src.codegen.generator import OUTPUT_LABEL_PREFIX
from src.core import ast
from src.core.constants import RuntimeErrorKind
from src.core.errors import RooplRuntimeError
from src.pisa import MachineProgram, resolve
from src.vm import MachineState, load, run

logger = logging.getLogger(__name__)


def read_outputs(state: MachineState) -> Dict[str, int]:
    """Output cells of a loaded program, in address order."""
    cells = sorted((address, label[len(OUTPUT_LABEL_PREFIX):])
                   for label, address in state.program.labels.items()
                   if label.startswith(OUTPUT_LABEL_PREFIX))
    return {name: int(state.memory[address]) for address, name in cells}


def check_trap(state: MachineState) -> None:
    if state.trapped:
        raise RooplRuntimeError(RuntimeErrorKind.RUNTIME_CHECK_TRAP,
                                f"runtime check failed; machine halted through the error handler "
                                f"after {state.steps} steps")


class VmBackend:
    name = "vm"

    def __init__(self, runtime_checks: bool = False, step_limit: Optional[int] = None,
                 memory_size: Optional[int] = None, trace: bool = False):
        self.runtime_checks = runtime_checks
        self.step_limit = step_limit
        self.memory_size = memory_size
        self.trace = trace
        self.state: Optional[MachineState] = None

    def assemble(self, program: ast.Program) -> MachineProgram:
        compiled = compile_program(program, build_class_model(program), runtime_checks=self.runtime_checks)
        return resolve(compiled.instructions)

    def execute(self, program: ast.Program) -> Dict[str, int]:
        machine_program = self.assemble(program)
        self.state = run(load(machine_program, self.memory_size, trace=self.trace), self.step_limit)
        check_trap(self.state)
        outputs = read_outputs(self.state)
        logger.info(f"VM produced {len(outputs)} outputs in {self.state.steps} steps")
        return outputs

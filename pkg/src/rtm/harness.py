"""
Harness for the reversible Turing machine simulator.

Rules are quadruples ``(q1, s1, s2, q2)``: a symbol rule rewrites ``s1`` to
``s2`` in state ``q1``; a shift rule has ``s1 = SLASH`` and moves the head
``LEFT`` or ``RIGHT``. The harness checks both determinism conditions, steps
the machine directly in Python as an oracle, and runs the generated ROOPL
program on either execution backend.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence

from src.core.errors import Diagnostic

logger = logging.getLogger(__name__)

BLANK = 0
SLASH = 2
LEFT = 3
RIGHT = 4

# result is a 32-bit word with one bit per cell
MAX_TAPE_CELLS = 31


class QuadrupleRule(NamedTuple):
    q1: int
    s1: int
    s2: int
    q2: int

    @property
    def is_shift(self) -> bool:
        return self.s1 == SLASH

    def __str__(self) -> str:
        return f"({self.q1}, {self.s1}, {self.s2}, {self.q2})"


@dataclass(frozen=True)
class TuringMachine:
    rules: tuple
    start: int
    final: int

    @classmethod
    def of(cls, rules: Sequence[Sequence[int]], start: int, final: int) -> "TuringMachine":
        return cls(tuple(QuadrupleRule(*r) for r in rules), start, final)


def harness_check_rtm(rules: Sequence[QuadrupleRule]) -> List[Diagnostic]:
    """
    Comprueba el determinismo hacia delante y hacia atrás.

    Args:
        rules: tabla de transiciones
    Returns:
        Un diagnóstico por cada par de reglas que viola alguna condición
    """
    diagnostics: List[Diagnostic] = []
    for rule in rules:
        if rule.is_shift and rule.s2 not in (LEFT, RIGHT):
            diagnostics.append(Diagnostic("MalformedRule", f"shift rule {rule} must move LEFT or RIGHT"))
        if not rule.is_shift and SLASH in (rule.s1, rule.s2):
            diagnostics.append(Diagnostic("MalformedRule", f"symbol rule {rule} uses the shift marker"))
    for a, b in itertools.combinations(rules, 2):
        both_symbol = not a.is_shift and not b.is_shift
        if a.q1 == b.q1 and not (both_symbol and a.s1 != b.s1):
            diagnostics.append(Diagnostic("ForwardDeterminism", f"rules {a} and {b} both apply in state {a.q1}"))
        if a.q2 == b.q2 and not (both_symbol and a.s2 != b.s2):
            diagnostics.append(Diagnostic("BackwardDeterminism", f"rules {a} and {b} both lead to state {a.q2}"))
    return diagnostics


def simulate_tm(machine: TuringMachine, tape: Sequence[int], max_steps: int = 10_000) -> List[int]:
    """Direct stepping oracle; the tape grows with blanks on either side as the head leaves it."""
    cells = list(tape) or [BLANK]
    pos, state = 0, machine.start
    for _ in range(max_steps):
        if state == machine.final:
            return cells
        if pos == len(cells):
            cells.append(BLANK)
        elif pos < 0:
            cells.insert(0, BLANK)
            pos = 0
        symbol = cells[pos]
        rule = _applicable(machine.rules, state, symbol)
        if rule is None:
            raise ValueError(f"no rule applies in state {state} reading {symbol}")
        state = rule.q2
        if rule.is_shift:
            pos += 1 if rule.s2 == RIGHT else -1
        else:
            cells[pos] = rule.s2
    raise ValueError(f"machine did not reach state {machine.final} within {max_steps} steps")


def _applicable(rules: Sequence[QuadrupleRule], state: int, symbol: int) -> Optional[QuadrupleRule]:
    for rule in rules:
        if rule.q1 == state and (rule.is_shift or rule.s1 == symbol):
            return rule
    return None


def decode_tape(output: Dict[str, int]) -> List[int]:
    """Output fields of the simulator -> tape of 0/1 symbols."""
    return [(output["result"] >> i) & 1 for i in range(output["cells"])]


def binary_view(tape: Sequence[int]) -> List[int]:
    """The part of a tape the simulator reports: 1 where the cell holds symbol 1."""
    return [1 if symbol == 1 else 0 for symbol in tape]


def run_rtm_program(machine: TuringMachine, tape: Sequence[int], backend: str = "interpreter",
                    **options) -> List[int]:
    """
    Ejecuta el simulador ROOPL generado y decodifica la cinta final.

    Args:
        machine: máquina reversible (se valida antes de ejecutar)
        tape: cinta de entrada
        backend: "interpreter" o "vm"
        options: opciones del backend (límite de pasos, memoria...)
    Returns:
        Cinta final como lista de 0/1
    """
    from src.backends.execution_backend_factory import ExecutionBackendFactory
    from src.frontend import desugar, parse_source

    from .program import rtm_source

    diagnostics = harness_check_rtm(machine.rules)
    if diagnostics:
        raise ValueError("; ".join(d.message for d in diagnostics))
    if len(tape) > MAX_TAPE_CELLS:
        raise ValueError(f"Tapes longer than {MAX_TAPE_CELLS} cells do not fit the result word")
    program = desugar(parse_source(rtm_source(machine.rules, tape, machine.start, machine.final)))
    output = ExecutionBackendFactory.create_backend(backend, **options).execute(program)
    logger.info(f"RTM run on {backend}: {output}")
    return decode_tape(output)


INCREMENT_MACHINE = TuringMachine.of([(1, 1, 1, 2), (1, BLANK, 1, 3), (2, SLASH, RIGHT, 1)], start=1, final=3)
IDENTITY_MACHINE = TuringMachine.of([(1, SLASH, RIGHT, 2)], start=1, final=2)
# flips 0/1 cells up to the end marker 5
FLIP_MACHINE = TuringMachine.of([(1, 0, 1, 2), (1, 1, 0, 2), (2, SLASH, RIGHT, 1), (1, 5, 5, 4)], start=1, final=4)

"""
Pipeline functions shared by the command line and the HTTP API.

Each function takes program text, runs the phases it needs (parse, desugar,
class analysis, type check, then invert / interpret / compile / simulate) and
returns a pydantic response. Failures surface as ``RooplError`` subclasses.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

from src.analysis import ClassModel, build_class_model, check_program, dump_layout, find_main
from src.api.schemas import (
    CheckResponse,
    CompileResponse,
    DiagnosticResponse,
    ExecResponse,
    InvertResponse,
    LayoutResponse,
    MachineResponse,
    RunResponse,
)
from src.backends import ExecutionBackendFactory, read_outputs
from src.codegen import compile_program
from src.core import ast, config
from src.core.errors import Diagnostic, StaticError, TypeCheckError
from src.frontend import desugar, format_program, parse_source
from src.inverter import invert_program
from src.pisa import emit_pal, parse_pal, resolve
from src.vm import MachineState, load, run

logger = logging.getLogger(__name__)


@dataclass
class AnalyzedProgram:
    surface: ast.Program
    core: ast.Program
    model: ClassModel
    main_class: str


def analyze_source(source: str) -> AnalyzedProgram:
    """
    Fases estáticas: parseo, desazucarado, análisis de clases y tipos.

    Args:
        source: texto del programa
    Returns:
        El programa (superficie y núcleo) con su mapa de clases
    """
    surface = parse_source(source)
    core = desugar(surface)
    model = build_class_model(core)
    diagnostics = check_program(model, core)
    if diagnostics:
        raise TypeCheckError(diagnostics)
    main_class, _ = find_main(model)
    logger.info(f"Analyzed {len(core.classes)} classes, main class {main_class}")
    return AnalyzedProgram(surface, core, model, main_class)


def _diagnostic_response(d: Diagnostic) -> DiagnosticResponse:
    return DiagnosticResponse(**d.to_dict())


def check_source(source: str) -> CheckResponse:
    try:
        analyzed = analyze_source(source)
    except StaticError as exc:
        return CheckResponse(ok=False, diagnostics=[_diagnostic_response(d) for d in exc.diagnostics()])
    return CheckResponse(ok=True, classes=len(analyzed.core.classes), main_class=analyzed.main_class)


def invert_source(source: str) -> InvertResponse:
    """Inverts the desugared program; calls with expression arguments print in their short form."""
    analyzed = analyze_source(source)
    return InvertResponse(source=format_program(invert_program(analyzed.core)))


def run_source(source: str, backend: str = "interpreter", **options) -> RunResponse:
    analyzed = analyze_source(source)
    executor = ExecutionBackendFactory.create_backend(backend, **options)
    outputs = executor.execute(analyzed.core)
    steps = executor.state.steps if getattr(executor, "state", None) is not None else None
    return RunResponse(backend=backend, outputs=outputs, steps=steps)


def source_lines(source: str) -> int:
    """Lines holding code (blank and comment-only lines excluded)."""
    return sum(1 for line in source.splitlines() if line.strip() and not line.strip().startswith("//"))


def compile_source(source: str, runtime_checks: bool = False) -> CompileResponse:
    analyzed = analyze_source(source)
    compiled = compile_program(analyzed.core, analyzed.model, runtime_checks=runtime_checks)
    logger.info(f"Compiled {analyzed.main_class} to {len(compiled.instructions)} instructions")
    return CompileResponse(pal=emit_pal(compiled.instructions), instructions=len(compiled.instructions),
                           source_lines=source_lines(source), main_class=compiled.main_class)


def machine_response(state: MachineState, dump_range=None) -> MachineResponse:
    memory = state.dump_memory(*dump_range) if dump_range else None
    return MachineResponse(outputs=read_outputs(state), steps=state.steps, trapped=state.trapped,
                           registers=list(state.registers), memory=memory)


def simulate_pal(pal: str, step_limit: Optional[int] = None, memory_size: Optional[int] = None,
                 dump_memory: Optional[str] = None, trace: bool = False) -> MachineResponse:
    """
    Carga y ejecuta un programa PAL.

    Args:
        pal: texto ensamblador
        step_limit: límite de instrucciones
        memory_size: tamaño de memoria en palabras
        dump_memory: rango 'a:b' de memoria a devolver
        trace: registra cada instrucción ejecutada
    Returns:
        Estado final resumido; ``trapped`` indica que saltó el manejador de errores
    """
    dump_range = config.parse_dump_range(dump_memory)
    state = run(load(resolve(parse_pal(pal)), memory_size, trace=trace), step_limit)
    return machine_response(state, dump_range)


def compare_outputs(interpreted: Dict[str, int], simulated: Dict[str, int]) -> List[str]:
    differences = []
    for name in sorted(set(interpreted) | set(simulated)):
        a, b = interpreted.get(name), simulated.get(name)
        if a != b:
            differences.append(f"{name}: interpreter {a}, vm {b}")
    return differences


def exec_source(source: str, runtime_checks: bool = False, step_limit: Optional[int] = None,
                memory_size: Optional[int] = None, max_call_depth: Optional[int] = None,
                trace: bool = False) -> ExecResponse:
    """Compile and simulate, interpret, and compare the two output maps."""
    analyzed = analyze_source(source)
    vm = ExecutionBackendFactory.create_backend("vm", runtime_checks=runtime_checks, step_limit=step_limit,
                                                memory_size=memory_size, trace=trace)
    simulated = vm.execute(analyzed.core)
    interpreted = ExecutionBackendFactory.create_backend("interpreter", max_call_depth=max_call_depth,
                                                         trace=trace).execute(analyzed.core)
    differences = compare_outputs(interpreted, simulated)
    if differences:
        logger.warning(f"Interpreter and VM disagree: {differences}")
    return ExecResponse(interpreter=interpreted, vm=simulated, match=not differences, steps=vm.state.steps,
                        differences=differences)


def layout_report(source: str) -> LayoutResponse:
    analyzed = analyze_source(source)
    return LayoutResponse(layout=dump_layout(analyzed.model))


__all__ = [
    "AnalyzedProgram", "analyze_source", "check_source", "invert_source", "run_source", "compile_source",
    "simulate_pal", "exec_source", "layout_report", "compare_outputs", "machine_response",
]

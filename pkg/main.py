"""
roopl: línea de comandos del toolchain ROOPL.

    roopl check FILE        static phases only
    roopl invert FILE       print the inverted program
    roopl run FILE          interpret and print the main object's fields
    roopl compile FILE      print PISA assembly
    roopl simulate FILE     load and run PISA assembly
    roopl exec FILE         compile + simulate + interpret, compare the outputs

FILE may be '-' for standard input. Exit codes: 1 static error, 2 runtime or
machine error, 3 interpreter/VM divergence.
"""
import json
import logging
import sys
from typing import Dict, Optional

import click

from src.core import config
from src.core.errors import RooplError, StaticError
from src.services import toolchain_service

EXIT_STATIC = 1
EXIT_RUNTIME = 2
EXIT_DIVERGENCE = 3

TRACE_LOGGERS = ("src.interpreter.interpreter.trace", "src.vm.machine.trace")


def _report(error: RooplError, file: Optional[str]) -> None:
    for diagnostic in error.diagnostics():
        click.echo(diagnostic.format(file), err=True)
    for location in getattr(error, "trace", []):
        click.echo(f"  at {location.format(file)}", err=True)


def _fail(error: Exception, file: Optional[str]) -> None:
    if isinstance(error, RooplError):
        _report(error, file)
        raise SystemExit(EXIT_STATIC if isinstance(error, StaticError) else EXIT_RUNTIME)
    click.echo(f"{file or '<input>'}: {error}", err=True)
    raise SystemExit(EXIT_STATIC)


def _print_outputs(outputs: Dict[str, int], as_json: bool) -> None:
    if as_json:
        click.echo(json.dumps(outputs, indent=2))
        return
    for name, value in outputs.items():
        click.echo(f"{name} = {value}")


def _enable_trace(trace: bool) -> None:
    if trace:
        for name in TRACE_LOGGERS:
            logging.getLogger(name).setLevel(logging.DEBUG)


def _write(text: str, output) -> None:
    if output is None:
        click.echo(text, nl=False)
    else:
        output.write(text)


source_argument = click.argument("source", type=click.File("r"))
json_option = click.option("--json", "as_json", is_flag=True, help="Machine-readable output")
trace_option = click.option("--trace", is_flag=True, help="Log every executed statement/instruction to stderr")
checks_option = click.option("--runtime-checks", is_flag=True, default=None,
                             help="Compile run-time checks (default: ROOPL_RUNTIME_CHECKS)")
steps_option = click.option("--steps", "step_limit", type=int, default=None, help="VM step limit")
memory_option = click.option("--memory-size", type=int, default=None, help="VM memory in words")


def _runtime_checks(flag: Optional[bool]) -> bool:
    return config.get_runtime_checks() if flag is None else flag


@click.group()
def main():
    """Toolchain for ROOPL, a reversible object-oriented language."""
    config.configure_logging("WARNING")


@main.command()
@source_argument
@json_option
def check(source, as_json: bool):
    """Parse, analyse classes and type-check."""
    result = toolchain_service.check_source(source.read())
    if as_json:
        click.echo(result.model_dump_json(indent=2))
    elif result.ok:
        click.echo(f"ok: {result.classes} classes, main class {result.main_class}")
    else:
        for d in result.diagnostics:
            where = f"{source.name}:{d.line}:{d.column}" if d.line is not None else source.name
            click.echo(f"{where}: {d.message} [{d.rule}]", err=True)
    if not result.ok:
        raise SystemExit(EXIT_STATIC)


@main.command()
@source_argument
@click.option("-o", "--output", type=click.File("w"), default=None, help="Output file (default: stdout)")
def invert(source, output):
    """Print the program with every method inverted."""
    try:
        result = toolchain_service.invert_source(source.read())
    except Exception as e:
        _fail(e, source.name)
    _write(result.source, output)


@main.command()
@source_argument
@json_option
@trace_option
@click.option("--backend", type=click.Choice(["interpreter", "vm"]), default="interpreter")
@click.option("--max-call-depth", type=int, default=None, help="Interpreter recursion limit")
@checks_option
@steps_option
@memory_option
def run(source, as_json: bool, trace: bool, backend: str, max_call_depth: Optional[int],
        runtime_checks: Optional[bool], step_limit: Optional[int], memory_size: Optional[int]):
    """Execute the program and print the fields of the main object."""
    _enable_trace(trace)
    if backend == "vm":
        options = dict(runtime_checks=_runtime_checks(runtime_checks), step_limit=step_limit,
                       memory_size=memory_size, trace=trace)
    else:
        options = dict(max_call_depth=max_call_depth or config.get_max_call_depth(), trace=trace)
    try:
        result = toolchain_service.run_source(source.read(), backend, **options)
    except Exception as e:
        _fail(e, source.name)
    _print_outputs(result.outputs, as_json)


@main.command(name="compile")
@source_argument
@click.option("-o", "--output", type=click.File("w"), default=None, help="Output file (default: stdout)")
@checks_option
@click.option("--dump-layout", is_flag=True, help="Print object layouts and vtables to stderr")
def compile_command(source, output, runtime_checks: Optional[bool], dump_layout: bool):
    """Compile to PISA assembly."""
    text = source.read()
    try:
        if dump_layout:
            click.echo(toolchain_service.layout_report(text).layout, err=True, nl=False)
        result = toolchain_service.compile_source(text, runtime_checks=_runtime_checks(runtime_checks))
    except Exception as e:
        _fail(e, source.name)
    _write(result.pal, output)


@main.command()
@source_argument
@json_option
@trace_option
@steps_option
@memory_option
@click.option("--dump-memory", default=None, help="Print memory words in the range start:end")
def simulate(source, as_json: bool, trace: bool, step_limit: Optional[int], memory_size: Optional[int],
             dump_memory: Optional[str]):
    """Load PISA assembly and run it to FINISH."""
    _enable_trace(trace)
    try:
        result = toolchain_service.simulate_pal(source.read(), step_limit=step_limit, memory_size=memory_size,
                                                dump_memory=dump_memory, trace=trace)
    except Exception as e:
        _fail(e, source.name)
    if as_json:
        click.echo(result.model_dump_json(indent=2))
    else:
        _print_outputs(result.outputs, False)
        click.echo(f"halted after {result.steps} steps", err=True)
        for line in result.memory or []:
            click.echo(line)
    if result.trapped:
        click.echo(f"{source.name}: runtime check failed", err=True)
        raise SystemExit(EXIT_RUNTIME)


@main.command(name="exec")
@source_argument
@json_option
@trace_option
@checks_option
@steps_option
@memory_option
def exec_command(source, as_json: bool, trace: bool, runtime_checks: Optional[bool], step_limit: Optional[int],
                 memory_size: Optional[int]):
    """Compile and simulate, interpret, and check that both agree."""
    _enable_trace(trace)
    try:
        result = toolchain_service.exec_source(source.read(), runtime_checks=_runtime_checks(runtime_checks),
                                               step_limit=step_limit, memory_size=memory_size, trace=trace)
    except Exception as e:
        _fail(e, source.name)
    if as_json:
        click.echo(result.model_dump_json(indent=2))
    else:
        _print_outputs(result.vm, False)
    if not result.match:
        for difference in result.differences:
            click.echo(f"divergence: {difference}", err=True)
        raise SystemExit(EXIT_DIVERGENCE)


if __name__ == "__main__":
    main()

"""
Translation of core ROOPL programs to PISA.

Every variable lives in a memory cell. Fields are addressed from the this
pointer ($3); parameters, local variables and object variables are bound to
a register holding the address of their cell, so call-by-reference passes
that address on the stack. Object variables point at a reference cell that
holds the object's address.

Layout of the generated program: output cells and vtables (DATA words),
START, the main prelude, the call of main, the postlude that moves main's
fields to the output cells, FINISH, the error handler, then every method.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from src.analysis.class_model import ClassModel, build_class_model, find_main
from src.core import ast
from src.core.constants import ModOp, Opcode
from src.core.errors import CodegenError
from src.pisa.instructions import Instruction, make, pop, push
from src.pisa.resolver import patch_immediates

from .expressions import ERROR_LABEL, Code, ExpressionEmitter, fetch_cell, unevaluate
from .registers import RO, SP, THIS, ZERO, CellBinding, FieldBinding, RegisterPool

logger = logging.getLogger(__name__)

OUTPUT_LABEL_PREFIX = "l_out."

_UPDATE_OPCODES = {ModOp.ADD: Opcode.ADD, ModOp.SUB: Opcode.SUB, ModOp.XOR: Opcode.XOR}


def method_label(owner: str, method: str) -> str:
    return f"l_{owner}.{method}"


def vtable_label(class_name: str) -> str:
    return f"l_{class_name}_vt"


def output_label(field_name: str) -> str:
    return OUTPUT_LABEL_PREFIX + field_name


def _push_all(registers: Sequence[int]) -> Code:
    code: Code = []
    for register in registers:
        code.extend(push(register, SP))
    return code


def _pop_all(registers: Sequence[int]) -> Code:
    code: Code = []
    for register in registers:
        code.extend(pop(register, SP))
    return code


@dataclass
class CompiledProgram:
    instructions: List[Instruction]
    main_class: str
    outputs: Dict[str, str] = field(default_factory=dict)


class MethodGenerator:
    """Code generation for the body of one method."""

    def __init__(self, program: "ProgramGenerator", class_name: str, method: ast.MethodDecl):
        self.program = program
        self.model = program.model
        self.class_name = class_name
        self.method = method
        self.pool = RegisterPool()
        info = self.model.info(class_name)
        self.scope: Dict[str, object] = {f.name: FieldBinding(info.offset(f.name), f.type) for f in info.fields}
        self.live: List[int] = []
        self.expressions = ExpressionEmitter(self.pool, self.lookup, program.runtime_checks)

    @property
    def checks(self) -> bool:
        return self.program.runtime_checks

    def lookup(self, name: str):
        try:
            return self.scope[name]
        except KeyError:
            raise CodegenError(f"unbound variable '{name}' in {self.class_name}::{self.method.name}")

    def _error_if_nonzero(self, register: int) -> Code:
        return [make(Opcode.BNE, register, ZERO, ERROR_LABEL)] if self.checks else []

    def _bind(self, name: str, register: int, type_name: str):
        previous = self.scope.get(name)
        self.scope[name] = CellBinding(register, type_name)
        self.live.append(register)
        return previous

    def _unbind(self, name: str, previous) -> None:
        self.live.pop()
        if previous is None:
            del self.scope[name]
        else:
            self.scope[name] = previous

    # ---- methods ----

    def emit_method(self) -> Code:
        """
        Genera el código de un método con entrada y salida compartidas.

        Returns:
            top (solo alcanzado a la vuelta), entrada, cuerpo y bottom
        """
        owner, name = self.class_name, self.method.name
        entry = method_label(owner, name)
        top, bottom = f"{entry}.top", f"{entry}.bot"
        params = [self.pool.acquire() for _ in self.method.params]
        for p, register in zip(self.method.params, params):
            self._bind(p.name, register, p.type)
        code: Code = [make(Opcode.BRA, bottom, label=top, comment=f"{owner}::{name}")]
        code += pop(RO, SP) + _push_all(reversed(params)) + push(THIS, SP)
        code += [make(Opcode.SWAPBR, RO, label=entry), make(Opcode.NEG, RO)]
        code += pop(THIS, SP) + _pop_all(params) + push(RO, SP)
        code += self.emit_body(self.method.body)
        code.append(make(Opcode.BRA, top, label=bottom))
        return code

    # ---- statements ----

    def emit_body(self, body: Sequence[ast.Statement]) -> Code:
        code: Code = []
        for s in body:
            code += self.emit_statement(s)
        return code

    def emit_statement(self, s: ast.Statement) -> Code:
        if isinstance(s, ast.Skip):
            return []
        if isinstance(s, ast.Assign):
            return self.emit_assign(s)
        if isinstance(s, ast.Swap):
            return self.emit_swap(s)
        if isinstance(s, ast.If):
            return self.emit_if(s)
        if isinstance(s, ast.Loop):
            return self.emit_loop(s)
        if isinstance(s, ast.LocalBlock):
            return self.emit_local_block(s)
        if isinstance(s, ast.ObjectBlock):
            return self.emit_object_block(s)
        if isinstance(s, (ast.LocalCall, ast.LocalUncall)):
            return self.emit_local_call(s, uncall=isinstance(s, ast.LocalUncall))
        if isinstance(s, (ast.ObjectCall, ast.ObjectUncall)):
            return self.emit_object_call(s, uncall=isinstance(s, ast.ObjectUncall))
        raise CodegenError(f"statement {type(s).__name__} must be desugared before code generation", s.location)

    def _into(self, register: int, e: ast.Expression, as_condition: bool = False) -> Code:
        """XOR the value of ``e`` into ``register`` and clean up after the evaluation."""
        mark = self.pool.mark()
        code, value = (self.expressions.condition(e) if as_condition else self.expressions.evaluate(e))
        self.pool.release_to(mark)
        return code + [make(Opcode.XOR, register, value)] + unevaluate(code)

    def emit_assign(self, s: ast.Assign) -> Code:
        mark = self.pool.mark()
        code, value = self.expressions.evaluate(s.expr)
        cell = self.pool.acquire()
        access = fetch_cell(self.lookup(s.target), cell)
        self.pool.release_to(mark)
        update = make(_UPDATE_OPCODES[s.op], cell, value)
        return code + access + [update] + access + unevaluate(code)

    def emit_swap(self, s: ast.Swap) -> Code:
        if s.left == s.right:
            return []
        a, b = self.pool.acquire_many(2)
        left = fetch_cell(self.lookup(s.left), a)
        right = fetch_cell(self.lookup(s.right), b)
        self.pool.release(b)
        self.pool.release(a)
        exchange = [make(Opcode.XOR, a, b), make(Opcode.XOR, b, a), make(Opcode.XOR, a, b)]
        return left + right + exchange + right + left

    def _condition_register(self) -> int:
        """A scratch register; statements leave every non-variable register zero."""
        register = self.pool.acquire()
        self.pool.release(register)
        return register

    def emit_if(self, s: ast.If) -> Code:
        n = self.program.next_id()
        test, test_false = f"l_{n}.test", f"l_{n}.test_false"
        assert_true, assertion = f"l_{n}.assert_true", f"l_{n}.assert"
        t = self._condition_register()
        # t is zero while either branch runs
        code = self._into_scratch(t, s.test)
        code += [make(Opcode.BEQ, t, ZERO, test_false, label=test), make(Opcode.XORI, t, 1)]
        code += self.emit_body(s.then_body)
        code += [make(Opcode.XORI, t, 1), make(Opcode.BRA, assertion, label=assert_true),
                 make(Opcode.BRA, test, label=test_false)]
        code += self.emit_body(s.else_body or ())
        code.append(make(Opcode.BNE, t, ZERO, assert_true, label=assertion))
        code += self._into_scratch(t, s.assertion)
        code += self._error_if_nonzero(t)
        return code

    def emit_loop(self, s: ast.Loop) -> Code:
        n = self.program.next_id()
        entry, test, assertion, exit_ = f"l_{n}.entry", f"l_{n}.test", f"l_{n}.assert", f"l_{n}.exit"
        t = self._condition_register()
        code: Code = [make(Opcode.XORI, t, 1), make(Opcode.BEQ, t, ZERO, assertion, label=entry)]
        code += self._into_scratch(t, s.entry)
        code += self._error_if_nonzero(t)
        code += self.emit_body(s.do_body or ())
        code += self._into_scratch(t, s.exit)
        code.append(make(Opcode.BNE, t, ZERO, exit_, label=test))
        code += self.emit_body(s.loop_body or ())
        code += [make(Opcode.BRA, entry, label=assertion), make(Opcode.BRA, test, label=exit_),
                 make(Opcode.XORI, t, 1)]
        return code

    def _into_scratch(self, register: int, e: ast.Expression, as_condition: bool = True) -> Code:
        if self.pool.acquire() != register:
            raise CodegenError("scratch register is not the next free register")
        code = self._into(register, e, as_condition)
        self.pool.release(register)
        return code

    def emit_local_block(self, s: ast.LocalBlock) -> Code:
        cell = self.pool.acquire()
        t = self._condition_register()
        code = self._into_scratch(t, s.init, as_condition=False) + [make(Opcode.XOR, cell, SP)] + push(t, SP)
        previous = self._bind(s.var, cell, ast.INT_TYPE)
        code += self.emit_body(s.body)
        self._unbind(s.var, previous)
        code += pop(t, SP) + [make(Opcode.XOR, cell, SP)]
        code += self._into_scratch(t, s.exit, as_condition=False) + self._error_if_nonzero(t)
        self.pool.release(cell)
        return code

    def emit_object_block(self, s: ast.ObjectBlock) -> Code:
        info = self.model.info(s.class_name)
        ref = self.pool.acquire()
        obj, vt = self.pool.acquire_many(2)
        prologue: Code = self._error_if_nonzero(obj)
        prologue += [make(Opcode.XOR, obj, SP), make(Opcode.XORI, vt, vtable_label(s.class_name)),
                     make(Opcode.EXCH, vt, SP)]
        if self.checks:
            cell = self.pool.acquire()
            for offset in range(1, info.size):
                prologue += [make(Opcode.ADDI, SP, offset), make(Opcode.EXCH, cell, SP),
                             make(Opcode.BNE, cell, ZERO, ERROR_LABEL), make(Opcode.EXCH, cell, SP),
                             make(Opcode.ADDI, SP, -offset)]
            self.pool.release(cell)
        prologue += [make(Opcode.ADDI, SP, info.size), make(Opcode.XOR, ref, SP), make(Opcode.EXCH, obj, SP),
                     make(Opcode.ADDI, SP, 1)]
        # obj and vt are zero from here until the epilogue
        self.pool.release(vt)
        self.pool.release(obj)
        previous = self._bind(s.var, ref, s.class_name)
        body = self.emit_body(s.body)
        self._unbind(s.var, previous)
        self.pool.release(ref)
        return prologue + body + unevaluate(prologue)

    # ---- invocations ----

    def _argument_registers(self, args: Sequence[str]) -> List[int]:
        registers = []
        for name in args:
            binding = self.lookup(name)
            if not isinstance(binding, CellBinding):
                raise CodegenError(f"field '{name}' cannot be passed to a local method")
            registers.append(binding.register)
        return registers

    def emit_local_call(self, s, uncall: bool) -> Code:
        resolved = self.model.lookup_method(self.class_name, s.method)
        if resolved is None:
            raise CodegenError(f"unknown method '{s.method}' in class '{self.class_name}'", s.location)
        owner, _ = resolved
        args = self._argument_registers(s.args)
        saves = [r for r in self.live if r not in args]
        setup = _push_all(saves) + _push_all(reversed(args)) + push(THIS, SP)
        jump = make(Opcode.RBRA if uncall else Opcode.BRA, method_label(owner, s.method))
        return setup + [jump] + unevaluate(setup)

    def emit_object_call(self, s, uncall: bool) -> Code:
        binding = self.lookup(s.callee)
        slot = self.model.info(binding.type).slot(s.method).index
        obj, target, vt, t = self.pool.acquire_many(4)
        copy = fetch_cell(binding, t) + [make(Opcode.XOR, obj, t)] + fetch_cell(binding, t)
        dispatch = [make(Opcode.EXCH, vt, obj), make(Opcode.ADDI, vt, slot), make(Opcode.EXCH, t, vt),
                    make(Opcode.XOR, target, t), make(Opcode.EXCH, t, vt), make(Opcode.ADDI, vt, -slot),
                    make(Opcode.EXCH, vt, obj)]
        self.pool.release(t)
        self.pool.release(vt)
        setup: Code = copy + ([make(Opcode.BEQ, obj, ZERO, ERROR_LABEL)] if self.checks else []) + dispatch

        mark = self.pool.mark()
        args = []
        for name in s.args:
            arg = self.lookup(name)
            if isinstance(arg, FieldBinding):
                address = self.pool.acquire()
                setup += [make(Opcode.XOR, address, THIS), make(Opcode.ADDI, address, arg.offset)]
                args.append(address)
            else:
                args.append(arg.register)
        saves = [THIS] + [r for r in self.live if r not in args]
        stack = _push_all(saves) + _push_all(reversed(args)) + push(obj, SP)

        n = self.program.next_id()
        site = f"l_{n}.jmp"
        if uncall:
            top, bottom = f"l_{n}.top", f"l_{n}.bot"
            jump = [make(Opcode.ADDI, target, f"-{site}"), make(Opcode.RBRA, bottom, label=top),
                    make(Opcode.SWAPBR, target, label=site), make(Opcode.NEG, target),
                    make(Opcode.BRA, top, label=bottom), make(Opcode.ADDI, target, site)]
        else:
            jump = [make(Opcode.ADDI, target, f"-{site}"), make(Opcode.SWAPBR, target, label=site),
                    make(Opcode.NEG, target), make(Opcode.ADDI, target, site)]
        self.pool.release_to(mark)
        self.pool.release(target)
        self.pool.release(obj)
        return setup + stack + jump + unevaluate(stack) + unevaluate(setup)


class ProgramGenerator:
    """
    Compila un programa núcleo completo.

    Args:
        model: mapa de clases del programa
        runtime_checks: emite saltos a l_error en aserciones, delocal, nil y división por cero
    """

    def __init__(self, model: ClassModel, runtime_checks: bool = False):
        self.model = model
        self.runtime_checks = runtime_checks
        self._ids = itertools.count()

    def next_id(self) -> int:
        return next(self._ids)

    def emit_static_section(self, main_class: str) -> Code:
        code: Code = [make(Opcode.DATA, 0, label=output_label(f.name), comment=f"output {f.name}")
                      for f in self.model.fields(main_class)]
        for name in self.model.class_names:
            slots = self.model.vtable(name)
            if not slots:
                code.append(make(Opcode.DATA, 0, label=vtable_label(name), comment=f"{name} has no methods"))
                continue
            for slot in slots:
                label = vtable_label(name) if slot.index == 0 else None
                code.append(make(Opcode.DATA, method_label(slot.owner, slot.name), label=label,
                                 comment=slot.label))
        return code

    def emit_prelude_postlude(self, main_class: str, stack_base: int) -> Code:
        """
        Arranque y cierre alrededor de la llamada a main.

        Args:
            main_class: clase que declara main
            stack_base: primera dirección libre tras el programa
        Returns:
            START, creación del objeto main, llamada, destrucción, copia de campos, FINISH y l_error
        """
        info = self.model.info(main_class)
        obj, vt = 4, 5
        setup: Code = [make(Opcode.ADDI, SP, stack_base), make(Opcode.XOR, obj, SP),
                       make(Opcode.XORI, vt, vtable_label(main_class)), make(Opcode.EXCH, vt, SP),
                       make(Opcode.ADDI, SP, info.size)] + list(push(obj, SP))
        code: Code = [make(Opcode.START, comment=f"main object of class {main_class} at {stack_base}")]
        code += setup + [make(Opcode.BRA, method_label(main_class, "main"))] + unevaluate(setup)
        address, value, out = 4, 5, 6
        for f in info.fields:
            cell = stack_base + info.offset(f.name)
            code += [make(Opcode.XORI, address, cell), make(Opcode.EXCH, value, address),
                     make(Opcode.XORI, out, output_label(f.name)), make(Opcode.EXCH, value, out),
                     make(Opcode.XORI, out, output_label(f.name)), make(Opcode.XORI, address, cell)]
        code += [make(Opcode.FINISH), make(Opcode.SWAPBR, RO, label=ERROR_LABEL, comment="runtime check failed"),
                 make(Opcode.FINISH)]
        return code

    def emit_methods(self) -> Code:
        code: Code = []
        for c in self.model.program.classes:
            for m in c.methods:
                code += MethodGenerator(self, c.name, m).emit_method()
        return code

    def compile(self) -> CompiledProgram:
        main_class, _ = find_main(self.model)
        static = self.emit_static_section(main_class)
        methods = self.emit_methods()
        size = len(static) + len(self.emit_prelude_postlude(main_class, 0)) + len(methods)
        instructions = static + self.emit_prelude_postlude(main_class, size) + methods
        logger.info(f"Compiled {len(self.model.class_names)} classes into {len(instructions)} instructions")
        outputs = {f.name: output_label(f.name) for f in self.model.fields(main_class)}
        return CompiledProgram(patch_immediates(instructions), main_class, outputs)


def compile_program(program: ast.Program, model: Optional[ClassModel] = None,
                    runtime_checks: bool = False) -> CompiledProgram:
    """Compile a type-checked core program; immediates are resolved, branch labels stay symbolic."""
    model = model or build_class_model(program)
    return ProgramGenerator(model, runtime_checks).compile()

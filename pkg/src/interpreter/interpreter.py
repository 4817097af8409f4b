"""
Reference interpreter for core ROOPL programs.

Object-typed variables live in reference cells holding the object's location;
method dispatch therefore dereferences twice (cell, then object). Local calls
are resolved against the class that declares the running method, object calls
against the dynamic class of the callee.
"""
import concurrent.futures
import logging
import sys
import threading
from typing import Dict, Optional, Sequence, Tuple

from src.analysis.class_model import ClassModel, build_class_model, find_main
from src.core import ast, config
from src.core.constants import BinaryOperator, Direction, ModOp, RuntimeErrorKind
from src.core.errors import RooplRuntimeError
from src.inverter.inverter import invert_statement, invert_statements
from src.utils.words import div_trunc, mod_trunc, to_word

from .values import Environment, ObjectValue, Store

logger = logging.getLogger(__name__)
trace_logger = logging.getLogger(f"{__name__}.trace")

OutputMap = Dict[str, int]

INTERPRETER_STACK_BYTES = 512 * 1024 * 1024
PYTHON_RECURSION_LIMIT = 1_000_000


def _binary(op: BinaryOperator, a: int, b: int, location) -> int:
    if op is BinaryOperator.ADD:
        return to_word(a + b)
    if op is BinaryOperator.SUB:
        return to_word(a - b)
    if op is BinaryOperator.MUL:
        return to_word(a * b)
    if op in (BinaryOperator.DIV, BinaryOperator.MOD):
        if b == 0:
            raise RooplRuntimeError(RuntimeErrorKind.DIVISION_BY_ZERO, "division by zero", location)
        return div_trunc(a, b) if op is BinaryOperator.DIV else mod_trunc(a, b)
    if op is BinaryOperator.XOR:
        return a ^ b
    if op is BinaryOperator.BAND:
        return a & b
    if op is BinaryOperator.BOR:
        return a | b
    if op is BinaryOperator.AND:
        return int(a != 0 and b != 0)
    if op is BinaryOperator.OR:
        return int(a != 0 or b != 0)
    if op is BinaryOperator.LT:
        return int(a < b)
    if op is BinaryOperator.GT:
        return int(a > b)
    if op is BinaryOperator.EQ:
        return int(a == b)
    if op is BinaryOperator.NEQ:
        return int(a != b)
    if op is BinaryOperator.LE:
        return int(a <= b)
    return int(a >= b)


def _update(op: ModOp, old: int, value: int) -> int:
    if op is ModOp.ADD:
        return to_word(old + value)
    if op is ModOp.SUB:
        return to_word(old - value)
    return old ^ value


def eval_expression(env: Environment, store: Store, e: ast.Expression) -> int:
    """
    Evalúa una expresión sin modificar el store.

    Args:
        env: nombres a ubicaciones
        store: ubicaciones a valores
        e: expresión
    Returns:
        Valor entero de 32 bits (nil vale 0)
    """
    if isinstance(e, ast.Constant):
        return to_word(e.value)
    if isinstance(e, ast.Nil):
        return 0
    if isinstance(e, ast.Variable):
        if e.name not in env:
            raise RooplRuntimeError(RuntimeErrorKind.UNBOUND_VARIABLE, f"variable '{e.name}' is unbound", e.location)
        return store[env[e.name]]
    return _binary(e.op, eval_expression(env, store, e.left), eval_expression(env, store, e.right), e.location)


class Interpreter:
    def __init__(self, model: ClassModel, store: Optional[Store] = None,
                 max_call_depth: Optional[int] = None, trace: bool = False):
        self.model = model
        self.store = store if store is not None else Store()
        self.max_call_depth = max_call_depth or config.get_max_call_depth()
        self.trace = trace
        self.depth = 0
        self._inverse_bodies: Dict[Tuple[str, str], Tuple[ast.Statement, ...]] = {}

    # ---- helpers ----

    def _eval(self, env: Environment, e: ast.Expression) -> int:
        return eval_expression(env, self.store, e)

    def _object_class(self, this: int) -> str:
        return self.store[this].class_name

    def _inverse_body(self, owner: str, method: ast.MethodDecl) -> Tuple[ast.Statement, ...]:
        key = (owner, method.name)
        if key not in self._inverse_bodies:
            self._inverse_bodies[key] = invert_statements(method.body)
        return self._inverse_bodies[key]

    # ---- statements ----

    def exec_body(self, this: int, context: str, env: Environment, body: Sequence[ast.Statement]) -> None:
        for s in body:
            self.exec_statement(this, context, env, s)

    def exec_statement(self, this: int, context: str, env: Environment, s: ast.Statement,
                       direction: Direction = Direction.FORWARD) -> None:
        if direction is Direction.BACKWARD:
            s = invert_statement(s)
        if self.trace:
            trace_logger.debug(f"{s.location or '?'}: {type(s).__name__}")
        try:
            self._execute(this, context, env, s)
        except RooplRuntimeError as exc:
            exc.push_frame(s.location)
            raise

    def _execute(self, this: int, context: str, env: Environment, s: ast.Statement) -> None:
        store = self.store
        if isinstance(s, ast.Skip):
            return
        if isinstance(s, ast.Assign):
            location = env[s.target]
            store[location] = _update(s.op, store[location], self._eval(env, s.expr))
        elif isinstance(s, ast.Swap):
            left, right = env[s.left], env[s.right]
            store[left], store[right] = store[right], store[left]
        elif isinstance(s, ast.If):
            taken = self._eval(env, s.test) != 0
            self.exec_body(this, context, env, s.then_body if taken else s.else_body)
            if (self._eval(env, s.assertion) != 0) != taken:
                raise RooplRuntimeError(RuntimeErrorKind.ASSERTION_IF,
                                        "exit assertion disagrees with the branch taken", s.location)
        elif isinstance(s, ast.Loop):
            self._loop(this, context, env, s)
        elif isinstance(s, ast.ObjectBlock):
            self._object_block(this, context, env, s)
        elif isinstance(s, ast.LocalBlock):
            location = store.allocate(self._eval(env, s.init))
            self.exec_body(this, context, {**env, s.var: location}, s.body)
            expected = self._eval(env, s.exit)
            if store[location] != expected:
                raise RooplRuntimeError(RuntimeErrorKind.DELOCAL_MISMATCH,
                                        f"'{s.var}' is {store[location]} at delocal, expected {expected}",
                                        s.location)
            store.release([location])
        elif isinstance(s, (ast.LocalCall, ast.LocalUncall)):
            owner, method = self.model.lookup_method(context, s.method)
            self._invoke(this, owner, method, env, s.args, isinstance(s, ast.LocalUncall))
        elif isinstance(s, (ast.ObjectCall, ast.ObjectUncall)):
            target = store[env[s.callee]]
            if target == 0:
                raise RooplRuntimeError(RuntimeErrorKind.NIL_DEREFERENCE,
                                        f"'{s.callee}' is nil when calling '{s.method}'", s.location)
            owner, method = self.model.lookup_method(self._object_class(target), s.method)
            self._invoke(target, owner, method, env, s.args, isinstance(s, ast.ObjectUncall))
        else:
            raise TypeError(f"{type(s).__name__} must be desugared before execution")

    def _loop(self, this: int, context: str, env: Environment, s: ast.Loop) -> None:
        if self._eval(env, s.entry) == 0:
            raise RooplRuntimeError(RuntimeErrorKind.ASSERTION_LOOP_ENTRY,
                                    "entry assertion is false on first arrival", s.location)
        while True:
            self.exec_body(this, context, env, s.do_body)
            if self._eval(env, s.exit) != 0:
                return
            self.exec_body(this, context, env, s.loop_body)
            if self._eval(env, s.entry) != 0:
                raise RooplRuntimeError(RuntimeErrorKind.ASSERTION_LOOP_ENTRY,
                                        "entry assertion is true on re-entry", s.location)

    def _object_block(self, this: int, context: str, env: Environment, s: ast.ObjectBlock) -> None:
        store = self.store
        obj = store.allocate(ObjectValue(s.class_name))
        fields = {f.name: store.allocate(0) for f in self.model.fields(s.class_name)}
        store[obj] = ObjectValue(s.class_name, fields)
        reference = store.allocate(obj)
        self.exec_body(this, context, {**env, s.var: reference}, s.body)
        if store[reference] != obj:
            raise RooplRuntimeError(RuntimeErrorKind.REFERENCE_NOT_RESTORED,
                                    f"'{s.var}' no longer refers to the constructed object", s.location)
        dirty = [name for name, loc in fields.items() if store[loc] != 0]
        if dirty:
            raise RooplRuntimeError(RuntimeErrorKind.NON_ZERO_FIELDS,
                                    f"fields of '{s.var}' not zero at destruct: {', '.join(dirty)}", s.location)
        store.release([reference, *fields.values(), obj])

    def _invoke(self, this: int, owner: str, method: ast.MethodDecl, env: Environment,
                args: Sequence[str], uncall: bool) -> None:
        if self.depth >= self.max_call_depth:
            raise RooplRuntimeError(RuntimeErrorKind.STACK_OVERFLOW,
                                    f"call depth exceeds {self.max_call_depth}", method.location)
        frame = dict(self.store[this].env)
        for param, arg in zip(method.params, args):
            frame[param.name] = env[arg]
        body = self._inverse_body(owner, method) if uncall else method.body
        self.depth += 1
        try:
            self.exec_body(this, owner, frame, body)
        finally:
            self.depth -= 1

    # ---- programs ----

    def run_main(self, program: ast.Program) -> OutputMap:
        main_class, main = find_main(self.model)
        fields = self.model.fields(main_class)
        field_locations = {f.name: self.store.allocate(0) for f in fields}
        this = self.store.allocate(ObjectValue(main_class, field_locations))
        logger.info(f"Running {main_class}::main")
        self.exec_body(this, main_class, dict(field_locations), main.body)
        return {f.name: self.store[field_locations[f.name]] for f in fields}


def exec_statement(model: ClassModel, this: int, env: Environment, s: ast.Statement, store: Store,
                   direction: Direction = Direction.FORWARD, context: Optional[str] = None) -> Store:
    """Execute one statement against ``store`` (mutated in place and returned)."""
    interpreter = Interpreter(model, store)
    if context is None:
        context = store[this].class_name
    interpreter.exec_statement(this, context, env, s, direction)
    return store


def run_on_deep_stack(fn, *args):
    """Run ``fn`` on a worker thread with a large stack so deep ROOPL recursion fits."""
    previous_limit = sys.getrecursionlimit()
    previous_size = threading.stack_size()
    sys.setrecursionlimit(max(previous_limit, PYTHON_RECURSION_LIMIT))
    threading.stack_size(INTERPRETER_STACK_BYTES)
    try:
        with concurrent.futures.ThreadPoolExecutor(max_workers=1) as executor:
            return executor.submit(fn, *args).result()
    finally:
        threading.stack_size(previous_size)
        sys.setrecursionlimit(previous_limit)


def run_program(program: ast.Program, model: Optional[ClassModel] = None,
                max_call_depth: Optional[int] = None, trace: bool = False) -> OutputMap:
    """
    Ejecuta el programa completo y devuelve los campos de la clase main.

    Args:
        program: programa núcleo verificado
        model: mapa de clases (se construye si falta)
        max_call_depth: límite de recursión
        trace: registra cada sentencia ejecutada
    Returns:
        Diccionario campo -> valor en orden de declaración
    """
    model = model or build_class_model(program)
    interpreter = Interpreter(model, max_call_depth=max_call_depth, trace=trace)
    try:
        return run_on_deep_stack(interpreter.run_main, program)
    except RecursionError:
        raise RooplRuntimeError(RuntimeErrorKind.STACK_OVERFLOW, "interpreter recursion limit reached")

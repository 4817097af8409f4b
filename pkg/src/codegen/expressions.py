"""
Expression templates.

Every expression is evaluated into a fresh register by straight-line code
that only XORs into zero-cleared registers; running the same code inverted
and in reverse order (``unevaluate``) clears every register it touched.
Intermediate registers of an expression stay allocated until the caller
releases them (``RegisterPool.release_to``) after unevaluation.
"""
import logging
from typing import Callable, List, Sequence, Tuple

from src.core import ast
from src.core.constants import BinaryOperator, Opcode, RELATIONAL_OPERATORS
from src.core.errors import CodegenError
from src.pisa.instructions import Instruction, invert_instruction, make

from .registers import THIS, ZERO, CellBinding, FieldBinding, RegisterPool

logger = logging.getLogger(__name__)

Code = List[Instruction]

ERROR_LABEL = "l_error"
WORD_MIN = -(2 ** 31)

_BOOLEAN_OPERATORS = RELATIONAL_OPERATORS | {BinaryOperator.AND, BinaryOperator.OR}


def unevaluate(code: Sequence[Instruction]) -> Code:
    """The inverse of straight-line code: inverted instructions in reverse order."""
    return [invert_instruction(i) for i in reversed(code)]


def is_boolean(e: ast.Expression) -> bool:
    return isinstance(e, ast.Binary) and e.op in _BOOLEAN_OPERATORS


def fetch_cell(binding, register: int) -> Code:
    """EXCH the variable's cell with ``register``; applying it twice restores the cell."""
    if isinstance(binding, CellBinding):
        return [make(Opcode.EXCH, register, binding.register)]
    return [make(Opcode.ADDI, THIS, binding.offset), make(Opcode.EXCH, register, THIS),
            make(Opcode.ADDI, THIS, -binding.offset)]


class ExpressionEmitter:
    """
    Traduce expresiones a código PISA reversible.

    Args:
        pool: registros disponibles del método
        lookup: nombre de variable -> FieldBinding | CellBinding
        runtime_checks: emite la comprobación de división por cero
    """

    def __init__(self, pool: RegisterPool, lookup: Callable[[str], object], runtime_checks: bool = False):
        self.pool = pool
        self.lookup = lookup
        self.runtime_checks = runtime_checks

    # ---- public ----

    def evaluate(self, e: ast.Expression) -> Tuple[Code, int]:
        """Code that leaves the value of ``e`` in the returned register."""
        if isinstance(e, ast.Constant):
            r = self.pool.acquire()
            return ([make(Opcode.XORI, r, e.value)] if e.value else []), r
        if isinstance(e, ast.Nil):
            return [], self.pool.acquire()
        if isinstance(e, ast.Variable):
            return self.read_variable(e.name)
        if isinstance(e, ast.Binary):
            left_code, a = self.evaluate(e.left)
            right_code, b = self.evaluate(e.right)
            r = self.pool.acquire()
            return left_code + right_code + self.binary(e.op, r, a, b), r
        raise CodegenError(f"cannot compile expression {e!r}")

    def condition(self, e: ast.Expression) -> Tuple[Code, int]:
        """Like ``evaluate`` but normalised to 0 or 1."""
        code, value = self.evaluate(e)
        if is_boolean(e):
            return code, value
        r = self.pool.acquire()
        return code + self.not_zero(r, value), r

    def read_variable(self, name: str) -> Tuple[Code, int]:
        binding = self.lookup(name)
        r = self.pool.acquire()
        t = self.pool.acquire()
        if isinstance(binding, FieldBinding):
            code = [make(Opcode.ADDI, THIS, binding.offset), make(Opcode.EXCH, t, THIS), make(Opcode.XOR, r, t),
                    make(Opcode.EXCH, t, THIS), make(Opcode.ADDI, THIS, -binding.offset)]
        else:
            code = [make(Opcode.EXCH, t, binding.register), make(Opcode.XOR, r, t),
                    make(Opcode.EXCH, t, binding.register)]
        self.pool.release(t)
        return code, r

    # ---- templates ----

    def _temps(self, count: int) -> List[int]:
        return self.pool.acquire_many(count)

    def _free(self, registers: Sequence[int]) -> None:
        for register in reversed(registers):
            self.pool.release(register)

    def binary(self, op: BinaryOperator, r: int, a: int, b: int) -> Code:
        if op is BinaryOperator.ADD:
            return [make(Opcode.XOR, r, a), make(Opcode.ADD, r, b)]
        if op is BinaryOperator.SUB:
            return [make(Opcode.XOR, r, a), make(Opcode.SUB, r, b)]
        if op is BinaryOperator.XOR:
            return [make(Opcode.XOR, r, a), make(Opcode.XOR, r, b)]
        if op is BinaryOperator.BAND:
            return [make(Opcode.ANDX, r, a, b)]
        if op is BinaryOperator.BOR:
            return [make(Opcode.ORX, r, a, b)]
        if op is BinaryOperator.EQ:
            return self.equal(r, a, b, negate=True)
        if op is BinaryOperator.NEQ:
            return self.equal(r, a, b, negate=False)
        if op is BinaryOperator.LT:
            return self.less(r, a, b)
        if op is BinaryOperator.GT:
            return self.less(r, b, a)
        if op is BinaryOperator.LE:
            return self.less(r, b, a) + [make(Opcode.XORI, r, 1)]
        if op is BinaryOperator.GE:
            return self.less(r, a, b) + [make(Opcode.XORI, r, 1)]
        if op is BinaryOperator.AND:
            return self.logical_and(r, a, b)
        if op is BinaryOperator.OR:
            return self.logical_or(r, a, b)
        if op is BinaryOperator.MUL:
            return self.multiply(r, a, b)
        if op in (BinaryOperator.DIV, BinaryOperator.MOD):
            return self.divide(r, a, b, remainder=op is BinaryOperator.MOD)
        raise CodegenError(f"no template for operator '{op.value}'")

    def not_zero(self, r: int, a: int) -> Code:
        """r ^= (a != 0), from the sign bit of a | -a."""
        u, w = self._temps(2)
        compute = [make(Opcode.XOR, u, a), make(Opcode.NEG, u), make(Opcode.ORX, w, a, u)]
        self._free([u, w])
        return compute + [make(Opcode.SRLX, r, w, 31)] + unevaluate(compute)

    def equal(self, r: int, a: int, b: int, negate: bool) -> Code:
        t, u, w = self._temps(3)
        compute = [make(Opcode.XOR, t, a), make(Opcode.XOR, t, b), make(Opcode.XOR, u, t), make(Opcode.NEG, u),
                   make(Opcode.ORX, w, t, u)]
        self._free([t, u, w])
        result = [make(Opcode.SRLX, r, w, 31)]
        if negate:
            result.append(make(Opcode.XORI, r, 1))
        return compute + result + unevaluate(compute)

    def less(self, r: int, a: int, b: int) -> Code:
        """Signed a < b: sign of (a - b) corrected for overflow."""
        d, x, y, z, w = self._temps(5)
        compute = [
            make(Opcode.XOR, d, a), make(Opcode.SUB, d, b),
            make(Opcode.XOR, x, a), make(Opcode.XOR, x, b),
            make(Opcode.XOR, y, a), make(Opcode.XOR, y, d),
            make(Opcode.ANDX, z, x, y),
            make(Opcode.XOR, w, d), make(Opcode.XOR, w, z),
        ]
        self._free([d, x, y, z, w])
        return compute + [make(Opcode.SRLX, r, w, 31)] + unevaluate(compute)

    def less_unsigned(self, r: int, a: int, b: int) -> Code:
        fa, fb = self._temps(2)
        flip = [make(Opcode.XOR, fa, a), make(Opcode.XORI, fa, WORD_MIN),
                make(Opcode.XOR, fb, b), make(Opcode.XORI, fb, WORD_MIN)]
        compare = self.less(r, fa, fb)
        self._free([fa, fb])
        return flip + compare + unevaluate(flip)

    def logical_and(self, r: int, a: int, b: int) -> Code:
        t1, t2 = self._temps(2)
        compute = self.not_zero(t1, a) + self.not_zero(t2, b)
        self._free([t1, t2])
        return compute + [make(Opcode.ANDX, r, t1, t2)] + unevaluate(compute)

    def logical_or(self, r: int, a: int, b: int) -> Code:
        (w,) = self._temps(1)
        compute = [make(Opcode.ORX, w, a, b)]
        result = self.not_zero(r, w)
        self._free([w])
        return compute + result + unevaluate(compute)

    def multiply(self, r: int, a: int, b: int) -> Code:
        """Shift-and-add over the 32 bits of b; wraps like the machine word."""
        s, bit, shifted, term = self._temps(4)
        code: Code = []
        for i in range(32):
            select = [make(Opcode.SRLX, s, b, i), make(Opcode.ANDIX, bit, s, 1), make(Opcode.SRLX, s, b, i),
                      make(Opcode.NEG, bit), make(Opcode.SLLX, shifted, a, i), make(Opcode.ANDX, term, shifted, bit)]
            code += select + [make(Opcode.ADD, r, term)] + unevaluate(select)
        self._free([s, bit, shifted, term])
        return code

    def divide(self, r: int, a: int, b: int, remainder: bool) -> Code:
        """
        Truncating division (or remainder) by restoring division of |a| by |b|.

        The old partial remainder is recovered from the shifted one and every
        quotient bit is folded into the quotient register, so the loop body
        leaves nothing behind but the quotient and the remainder.
        """
        regs = self._temps(14)
        sa, sb, ma, mb, ua, ub, sq, mq, q, current, following, c, s, t = regs
        compute: Code = [
            make(Opcode.SRLX, sa, a, 31), make(Opcode.SRLX, sb, b, 31),
            make(Opcode.XOR, ma, sa), make(Opcode.NEG, ma),
            make(Opcode.XOR, mb, sb), make(Opcode.NEG, mb),
            make(Opcode.XOR, ua, a), make(Opcode.XOR, ua, ma), make(Opcode.SUB, ua, ma),
            make(Opcode.XOR, ub, b), make(Opcode.XOR, ub, mb), make(Opcode.SUB, ub, mb),
            make(Opcode.XOR, sq, sa), make(Opcode.XOR, sq, sb),
            make(Opcode.XOR, mq, sq), make(Opcode.NEG, mq),
        ]
        for i in reversed(range(32)):
            compute += [
                make(Opcode.SLLX, following, current, 1),
                make(Opcode.SRLX, s, ua, i), make(Opcode.ANDIX, following, s, 1), make(Opcode.SRLX, s, ua, i),
                make(Opcode.SRLX, current, following, 1),
            ]
            compute += self.less_unsigned(c, following, ub) + [make(Opcode.XORI, c, 1)]
            compute += [make(Opcode.NEG, c), make(Opcode.ANDX, t, ub, c), make(Opcode.SUB, following, t),
                        make(Opcode.ANDX, t, ub, c), make(Opcode.NEG, c)]
            compute += [make(Opcode.SLLX, q, c, i),
                        make(Opcode.SRLX, s, q, i), make(Opcode.ANDIX, c, s, 1), make(Opcode.SRLX, s, q, i)]
            current, following = following, current
        self._free(regs)
        if remainder:
            result = [make(Opcode.XOR, r, current), make(Opcode.XOR, r, ma), make(Opcode.SUB, r, ma)]
        else:
            result = [make(Opcode.XOR, r, q), make(Opcode.XOR, r, mq), make(Opcode.SUB, r, mq)]
        check = [make(Opcode.BEQ, b, ZERO, ERROR_LABEL)] if self.runtime_checks else []
        return check + compute + result + unevaluate(compute)

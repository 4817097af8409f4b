from enum import Enum


class BinaryOperator(Enum):
    """Operadores binarios de expresiones"""
    ADD = "+"
    SUB = "-"
    XOR = "^"
    MUL = "*"
    DIV = "/"
    MOD = "%"
    BAND = "&"
    BOR = "|"
    AND = "&&"
    OR = "||"
    LT = "<"
    GT = ">"
    EQ = "="
    NEQ = "!="
    LE = "<="
    GE = ">="

    @property
    def is_comparison(self) -> bool:
        return self in RELATIONAL_OPERATORS

    @property
    def precedence(self) -> int:
        return PRECEDENCE[self]


class ModOp(Enum):
    """Operadores de actualización reversible"""
    ADD = "+="
    SUB = "-="
    XOR = "^="

    def inverse(self) -> "ModOp":
        if self is ModOp.ADD:
            return ModOp.SUB
        if self is ModOp.SUB:
            return ModOp.ADD
        return self


RELATIONAL_OPERATORS = frozenset({
    BinaryOperator.LT, BinaryOperator.GT, BinaryOperator.EQ,
    BinaryOperator.NEQ, BinaryOperator.LE, BinaryOperator.GE,
})

# Loosest binds lowest
PRECEDENCE = {
    BinaryOperator.OR: 1,
    BinaryOperator.AND: 2,
    BinaryOperator.LT: 3, BinaryOperator.GT: 3, BinaryOperator.EQ: 3,
    BinaryOperator.NEQ: 3, BinaryOperator.LE: 3, BinaryOperator.GE: 3,
    BinaryOperator.BOR: 4, BinaryOperator.XOR: 4, BinaryOperator.BAND: 4,
    BinaryOperator.ADD: 5, BinaryOperator.SUB: 5,
    BinaryOperator.MUL: 6, BinaryOperator.DIV: 6, BinaryOperator.MOD: 6,
}

KEYWORDS = frozenset({
    "class", "inherits", "method", "int", "nil", "if", "then", "else", "fi",
    "from", "do", "loop", "until", "construct", "destruct", "local", "delocal",
    "call", "uncall", "skip", "reversal",
})

CONSTRUCTOR_METHOD = "constructor"
MAIN_METHOD = "main"
FRESH_PREFIX = "$tmp"

WORD_BITS = 32
WORD_MAX = 2 ** 31 - 1


class RuntimeErrorKind(Enum):
    """Errores en tiempo de ejecución del intérprete y de la VM"""
    ASSERTION_IF = "AssertionFailure(If)"
    ASSERTION_LOOP_ENTRY = "AssertionFailure(LoopEntry)"
    NON_ZERO_FIELDS = "NonZeroFieldsAtDestruct"
    REFERENCE_NOT_RESTORED = "ReferenceNotRestored"
    DELOCAL_MISMATCH = "DelocalMismatch"
    NIL_DEREFERENCE = "NilDereference"
    DIVISION_BY_ZERO = "DivisionByZero"
    UNBOUND_VARIABLE = "UnboundVariable"
    STACK_OVERFLOW = "StackOverflow"
    RUNTIME_CHECK_TRAP = "RuntimeCheckTrap"


class ClassErrorKind(Enum):
    UNKNOWN_BASE_CLASS = "UnknownBaseClass"
    INHERITANCE_CYCLE = "InheritanceCycle"
    DUPLICATE_CLASS_NAME = "DuplicateClassName"
    OVERRIDE_SIGNATURE_MISMATCH = "OverrideSignatureMismatch"
    FIELD_SHADOWS_INHERITED = "FieldShadowsInherited"
    DUPLICATE_FIELD = "DuplicateField"
    DUPLICATE_METHOD = "DuplicateMethod"
    DUPLICATE_PARAMETER = "DuplicateParameter"
    UNKNOWN_CLASS = "UnknownClass"
    NO_MAIN = "NoMain"
    MULTIPLE_MAIN = "MultipleMain"


class Direction(Enum):
    FORWARD = 1
    BACKWARD = -1


class BackendKind(Enum):
    INTERPRETER = "interpreter"
    VM = "vm"


class Opcode(Enum):
    """Mnemónicos PISA con el formato de sus operandos (r=registro, c=inmediato, l=etiqueta)"""
    ADD = ("ADD", "rr")
    ADDI = ("ADDI", "rc")
    ANDX = ("ANDX", "rrr")
    ANDIX = ("ANDIX", "rrc")
    NORX = ("NORX", "rrr")
    NEG = ("NEG", "r")
    ORX = ("ORX", "rrr")
    ORIX = ("ORIX", "rrc")
    RL = ("RL", "rc")
    RLV = ("RLV", "rr")
    RR = ("RR", "rc")
    RRV = ("RRV", "rr")
    SLLX = ("SLLX", "rrc")
    SLLVX = ("SLLVX", "rrr")
    SRAX = ("SRAX", "rrc")
    SRAVX = ("SRAVX", "rrr")
    SRLX = ("SRLX", "rrc")
    SRLVX = ("SRLVX", "rrr")
    SUB = ("SUB", "rr")
    XOR = ("XOR", "rr")
    XORI = ("XORI", "rc")
    BEQ = ("BEQ", "rrl")
    BGEZ = ("BGEZ", "rl")
    BGTZ = ("BGTZ", "rl")
    BLEZ = ("BLEZ", "rl")
    BLTZ = ("BLTZ", "rl")
    BNE = ("BNE", "rrl")
    BRA = ("BRA", "l")
    EXCH = ("EXCH", "rr")
    SWAPBR = ("SWAPBR", "r")
    RBRA = ("RBRA", "l")
    START = ("START", "")
    FINISH = ("FINISH", "")
    DATA = ("DATA", "c")

    def __init__(self, mnemonic: str, operands: str):
        self.mnemonic = mnemonic
        self.operands = operands

    @classmethod
    def from_mnemonic(cls, mnemonic: str) -> "Opcode":
        return _OPCODES_BY_MNEMONIC[mnemonic]

    @property
    def is_branch(self) -> bool:
        return "l" in self.operands

    @property
    def is_xform(self) -> bool:
        """Instructions that XOR their result into the destination register."""
        return self in XFORM_OPCODES


_OPCODES_BY_MNEMONIC = {op.mnemonic: op for op in Opcode}

XFORM_OPCODES = frozenset({
    Opcode.ANDX, Opcode.ANDIX, Opcode.NORX, Opcode.ORX, Opcode.ORIX, Opcode.SLLX,
    Opcode.SLLVX, Opcode.SRAX, Opcode.SRAVX, Opcode.SRLX, Opcode.SRLVX,
})

REGISTER_COUNT = 32

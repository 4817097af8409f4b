from .expressions import ExpressionEmitter, unevaluate
from .generator import CompiledProgram, MethodGenerator, ProgramGenerator, compile_program
from .registers import RegisterPool

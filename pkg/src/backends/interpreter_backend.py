import logging
from typing import Optional

from src.analysis import build_class_model
from src.core import ast
from src.interpreter import OutputMap, run_program

logger = logging.getLogger(__name__)


class InterpreterBackend:
    name = "interpreter"

    def __init__(self, max_call_depth: Optional[int] = None, trace: bool = False):
        self.max_call_depth = max_call_depth
        self.trace = trace

    def execute(self, program: ast.Program) -> OutputMap:
        model = build_class_model(program)
        return run_program(program, model, max_call_depth=self.max_call_depth, trace=self.trace)

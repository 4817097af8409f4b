from .interpreter import Interpreter, OutputMap, eval_expression, exec_statement, run_on_deep_stack, run_program
from .values import Environment, ObjectValue, Store

from .class_model import ClassInfo, ClassModel, MethodSlot, build_class_model, dump_layout, find_main, subtype
from .type_checker import TypeEnvironment, check_program, check_statement, type_of_expression, vars_of

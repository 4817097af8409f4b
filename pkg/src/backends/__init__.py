from .execution_backend_factory import ExecutionBackendFactory
from .interpreter_backend import InterpreterBackend
from .vm_backend import VmBackend, check_trap, read_outputs

"""
Factory para crear backends de ejecución según el método requerido.
"""
from src.core.constants import BackendKind


class ExecutionBackendFactory:
    @staticmethod
    def create_backend(backend_type="interpreter", **options):
        """
        Crea un backend de ejecución para programas núcleo ya verificados.

        Args:
            backend_type: "interpreter" (semántica de referencia) o "vm" (compila a PISA y simula)
            options: max_call_depth/trace para el intérprete;
                     runtime_checks/step_limit/memory_size/trace para la VM

        Returns:
            Un backend con ``execute(program) -> OutputMap``
        """
        kind = BackendKind(backend_type)
        if kind is BackendKind.VM:
            from .vm_backend import VmBackend
            return VmBackend(**options)
        from .interpreter_backend import InterpreterBackend
        return InterpreterBackend(**options)

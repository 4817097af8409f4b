"""
Diagnostics and exception hierarchy shared by every phase of the toolchain.

Every error derives from ``RooplError`` (a ``ValueError``) so the HTTP layer can
answer 400 for user-caused failures and 500 for everything else.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .constants import ClassErrorKind, RuntimeErrorKind
from .location import SourceLocation


@dataclass(frozen=True)
class Diagnostic:
    """Un diagnóstico con regla, mensaje y posición"""
    rule: str
    message: str
    location: Optional[SourceLocation] = None

    def format(self, file: Optional[str] = None) -> str:
        if self.location is None:
            return f"{file or '<input>'}: {self.message} [{self.rule}]"
        return f"{self.location.format(file)}: {self.message} [{self.rule}]"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rule": self.rule,
            "message": self.message,
            "line": self.location.line if self.location else None,
            "column": self.location.column if self.location else None,
        }


class RooplError(ValueError):
    """Base de todos los errores del toolchain"""
    rule = "Error"

    def __init__(self, message: str, location: Optional[SourceLocation] = None):
        super().__init__(message)
        self.message = message
        self.location = location

    def to_diagnostic(self) -> Diagnostic:
        return Diagnostic(self.rule, self.message, self.location)

    def diagnostics(self) -> List[Diagnostic]:
        return [self.to_diagnostic()]


class StaticError(RooplError):
    """Errors detected before execution (exit code 1)."""


class LexError(StaticError):
    rule = "LexError"


class ParseError(StaticError):
    rule = "ParseError"

    def __init__(self, message: str, location: Optional[SourceLocation] = None,
                 expected: Optional[List[str]] = None):
        self.expected = sorted(expected or [])
        if self.expected:
            message = f"{message}; expected one of: {', '.join(self.expected)}"
        super().__init__(message, location)


class ClassAnalysisError(StaticError):
    def __init__(self, kind: ClassErrorKind, message: str,
                 location: Optional[SourceLocation] = None):
        super().__init__(message, location)
        self.kind = kind
        self.rule = kind.value


class TypeCheckError(StaticError):
    rule = "TypeError"

    def __init__(self, diagnostics: List[Diagnostic]):
        first = diagnostics[0]
        super().__init__(first.message, first.location)
        self._diagnostics = list(diagnostics)

    def diagnostics(self) -> List[Diagnostic]:
        return list(self._diagnostics)


class CodegenError(StaticError):
    rule = "CodegenError"


class RegisterPoolExhausted(CodegenError):
    rule = "RegisterPoolExhausted"


class RooplRuntimeError(RooplError):
    """Runtime failure of the interpreter or of a trapped VM run (exit code 2)."""

    def __init__(self, kind: RuntimeErrorKind, message: str,
                 location: Optional[SourceLocation] = None):
        super().__init__(message, location)
        self.kind = kind
        self.rule = kind.value
        self.trace: List[SourceLocation] = []

    def push_frame(self, location: Optional[SourceLocation]) -> None:
        if location is not None and (not self.trace or self.trace[-1] != location):
            self.trace.append(location)


class PisaError(StaticError):
    """Errors in PAL text or in resolved machine programs."""
    rule = "PisaError"


class PalSyntaxError(PisaError):
    rule = "PalSyntaxError"


class UnknownMnemonic(PalSyntaxError):
    rule = "UnknownMnemonic"


class BadRegister(PalSyntaxError):
    rule = "BadRegister"


class UndefinedLabel(PisaError):
    rule = "UndefinedLabel"


class DuplicateLabel(PisaError):
    rule = "DuplicateLabel"


class FinishBeforeStart(PisaError):
    rule = "FinishBeforeStart"


class MachineError(RooplError):
    """Failures while loading or stepping the virtual machine (exit code 2)."""
    rule = "MachineError"

    def __init__(self, message: str, state: Any = None):
        super().__init__(message)
        self.state = state


class LoadError(MachineError):
    rule = "LoadError"


class StepLimitExceeded(MachineError):
    rule = "StepLimitExceeded"

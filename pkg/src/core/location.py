from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class SourceLocation:
    """Posición en el texto fuente (1-based)"""

    line: int
    column: int
    file: Optional[str] = None

    def format(self, file: Optional[str] = None) -> str:
        name = file or self.file or "<input>"
        return f"{name}:{self.line}:{self.column}"

    def to_dict(self) -> dict:
        return {"line": self.line, "column": self.column, "file": self.file}

    def __str__(self) -> str:
        return self.format()

"""
Register plan and stack-disciplined allocation of the general-purpose pool.
"""
from dataclasses import dataclass
from typing import List

from src.core.errors import RegisterPoolExhausted

ZERO = 0
SP = 1
RO = 2
THIS = 3
POOL = tuple(range(4, 32))


class RegisterPool:
    """Hands out r4..r31; the last register acquired is the first released."""

    def __init__(self):
        self._in_use: List[int] = []

    def acquire(self) -> int:
        if len(self._in_use) == len(POOL):
            raise RegisterPoolExhausted(f"all {len(POOL)} general-purpose registers are in use")
        register = POOL[len(self._in_use)]
        self._in_use.append(register)
        return register

    def acquire_many(self, count: int) -> List[int]:
        return [self.acquire() for _ in range(count)]

    def release(self, register: int) -> None:
        if not self._in_use or self._in_use[-1] != register:
            raise RuntimeError(f"register ${register} released out of order")
        self._in_use.pop()

    def mark(self) -> int:
        return len(self._in_use)

    def release_to(self, mark: int) -> None:
        del self._in_use[mark:]

    @property
    def in_use(self) -> int:
        return len(self._in_use)


@dataclass(frozen=True)
class FieldBinding:
    """Instance variable at ``offset`` from the this pointer."""
    offset: int
    type: str


@dataclass(frozen=True)
class CellBinding:
    """Variable whose memory cell address is held in ``register``."""
    register: int
    type: str


Binding = object

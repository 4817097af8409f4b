"""
Runtime values of the reference interpreter.

Locations are plain ints (0 is nil and never allocated). A cell holds either a
32-bit integer (which for object-typed variables is the location of the
object) or an ``ObjectValue``.
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, Union

Environment = Dict[str, int]


@dataclass
class ObjectValue:
    class_name: str
    env: Environment = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"class": self.class_name, "fields": dict(self.env)}


Value = Union[int, ObjectValue]


class Store:
    """Map from locations to values with a LIFO-friendly allocator."""

    def __init__(self, cells: Dict[int, Value] = None):
        self._cells: Dict[int, Value] = dict(cells or {})
        self._next = max(self._cells, default=0) + 1

    def allocate(self, value: Value = 0) -> int:
        location = self._next
        self._cells[location] = value
        self._next += 1
        return location

    def release(self, locations: Iterable[int]) -> None:
        for location in locations:
            del self._cells[location]
        self._next = max(self._cells, default=0) + 1

    def restrict(self, domain: Iterable[int]) -> "Store":
        keep = set(domain)
        return Store({k: v for k, v in self._cells.items() if k in keep})

    def __getitem__(self, location: int) -> Value:
        return self._cells[location]

    def __setitem__(self, location: int, value: Value) -> None:
        if location not in self._cells:
            raise KeyError(location)
        self._cells[location] = value

    def __contains__(self, location: int) -> bool:
        return location in self._cells

    def domain(self) -> set:
        return set(self._cells)

    def snapshot(self) -> Dict[int, Value]:
        """Deep copy usable for equality checks."""
        return {k: (ObjectValue(v.class_name, dict(v.env)) if isinstance(v, ObjectValue) else v)
                for k, v in self._cells.items()}

    def __eq__(self, other) -> bool:
        return isinstance(other, Store) and self._cells == other._cells

    def __len__(self) -> int:
        return len(self._cells)

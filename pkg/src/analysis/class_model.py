"""
Class map construction: inheritance resolution, hierarchy validation, object
layouts and virtual function tables.

Inherited fields occupy the leading offsets of every subclass and inherited
methods keep their vtable slot, so code compiled against a base class works
on any subclass instance.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.core import ast
from src.core.constants import ClassErrorKind, MAIN_METHOD
from src.core.errors import ClassAnalysisError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MethodSlot:
    index: int
    name: str
    owner: str

    @property
    def label(self) -> str:
        return f"{self.owner}::{self.name}"


@dataclass
class ClassInfo:
    """Resolved view of one class."""
    decl: ast.ClassDecl
    fields: List[ast.VarDecl] = field(default_factory=list)
    vtable: List[MethodSlot] = field(default_factory=list)
    methods: Dict[str, Tuple[str, ast.MethodDecl]] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.decl.name

    @property
    def base(self) -> Optional[str]:
        return self.decl.base

    @property
    def size(self) -> int:
        return 1 + len(self.fields)

    def offset(self, field_name: str) -> int:
        for index, f in enumerate(self.fields):
            if f.name == field_name:
                return index + 1
        raise KeyError(field_name)

    def field_type(self, field_name: str) -> Optional[str]:
        for f in self.fields:
            if f.name == field_name:
                return f.type
        return None

    def slot(self, method_name: str) -> MethodSlot:
        for s in self.vtable:
            if s.name == method_name:
                return s
        raise KeyError(method_name)


class ClassModel:
    """Class map plus layouts and the subtype relation of a program."""

    def __init__(self, program: ast.Program, infos: Dict[str, ClassInfo]):
        self.program = program
        self.infos = infos

    @property
    def class_names(self) -> List[str]:
        return [c.name for c in self.program.classes]

    def has_class(self, name: str) -> bool:
        return name in self.infos

    def info(self, name: str) -> ClassInfo:
        return self.infos[name]

    def fields(self, name: str) -> List[ast.VarDecl]:
        return self.infos[name].fields

    def methods(self, name: str) -> Dict[str, Tuple[str, ast.MethodDecl]]:
        return self.infos[name].methods

    def lookup_method(self, class_name: str, method: str) -> Optional[Tuple[str, ast.MethodDecl]]:
        return self.infos[class_name].methods.get(method)

    def vtable(self, name: str) -> List[MethodSlot]:
        return self.infos[name].vtable

    def size(self, name: str) -> int:
        return self.infos[name].size

    def ancestors(self, name: str) -> List[str]:
        """``name`` followed by its base chain up to the root."""
        chain = []
        current: Optional[str] = name
        while current is not None:
            chain.append(current)
            current = self.infos[current].base
        return chain

    def subtype(self, c1: str, c2: str) -> bool:
        return c2 in self.ancestors(c1)


def _error(kind: ClassErrorKind, message: str, location=None) -> ClassAnalysisError:
    return ClassAnalysisError(kind, message, location)


def _check_declarations(program: ast.Program) -> Dict[str, ast.ClassDecl]:
    declared: Dict[str, ast.ClassDecl] = {}
    for c in program.classes:
        if c.name in declared:
            raise _error(ClassErrorKind.DUPLICATE_CLASS_NAME, f"class '{c.name}' is declared twice", c.location)
        declared[c.name] = c
        seen_fields = set()
        for f in c.fields:
            if f.name in seen_fields:
                raise _error(ClassErrorKind.DUPLICATE_FIELD,
                             f"field '{f.name}' is declared twice in class '{c.name}'", f.location)
            seen_fields.add(f.name)
        seen_methods = set()
        for m in c.methods:
            if m.name in seen_methods:
                raise _error(ClassErrorKind.DUPLICATE_METHOD,
                             f"method '{m.name}' is declared twice in class '{c.name}'", m.location)
            seen_methods.add(m.name)
            params = [p.name for p in m.params]
            for p in m.params:
                if params.count(p.name) > 1:
                    raise _error(ClassErrorKind.DUPLICATE_PARAMETER,
                                 f"parameter '{p.name}' repeated in method '{c.name}::{m.name}'", p.location)
    return declared


def _check_hierarchy(declared: Dict[str, ast.ClassDecl]) -> None:
    for c in declared.values():
        if c.base is not None and c.base not in declared:
            raise _error(ClassErrorKind.UNKNOWN_BASE_CLASS,
                         f"class '{c.name}' inherits from unknown class '{c.base}'", c.location)
    for c in declared.values():
        visited = {c.name}
        current = c.base
        while current is not None:
            if current in visited:
                raise _error(ClassErrorKind.INHERITANCE_CYCLE,
                             f"inheritance cycle through class '{c.name}'", c.location)
            visited.add(current)
            current = declared[current].base


def _check_types(declared: Dict[str, ast.ClassDecl]) -> None:
    for c in declared.values():
        decls = list(c.fields) + [p for m in c.methods for p in m.params]
        for d in decls:
            if not d.is_int and d.type not in declared:
                raise _error(ClassErrorKind.UNKNOWN_CLASS,
                             f"unknown class '{d.type}' in declaration of '{d.name}'", d.location)


def _resolve(name: str, declared: Dict[str, ast.ClassDecl], infos: Dict[str, ClassInfo]) -> ClassInfo:
    if name in infos:
        return infos[name]
    decl = declared[name]
    info = ClassInfo(decl)
    if decl.base is not None:
        base = _resolve(decl.base, declared, infos)
        inherited = {f.name for f in base.fields}
        for f in decl.fields:
            if f.name in inherited:
                raise _error(ClassErrorKind.FIELD_SHADOWS_INHERITED,
                             f"field '{f.name}' of '{name}' shadows an inherited field", f.location)
        info.fields = list(base.fields) + list(decl.fields)
        info.vtable = list(base.vtable)
        info.methods = dict(base.methods)
    else:
        info.fields = list(decl.fields)

    for m in decl.methods:
        if m.name in info.methods:
            owner, overridden = info.methods[m.name]
            if m.signature != overridden.signature:
                raise _error(ClassErrorKind.OVERRIDE_SIGNATURE_MISMATCH,
                             f"'{name}::{m.name}' overrides '{owner}::{m.name}' with a different signature",
                             m.location)
            slot = info.slot(m.name)
            info.vtable[slot.index] = MethodSlot(slot.index, m.name, name)
        else:
            info.vtable.append(MethodSlot(len(info.vtable), m.name, name))
        info.methods[m.name] = (name, m)
    # keep resolved methods in slot order
    info.methods = {s.name: info.methods[s.name] for s in info.vtable}
    infos[name] = info
    return info


def build_class_model(program: ast.Program) -> ClassModel:
    """
    Construye el mapa de clases con herencia resuelta.

    Args:
        program: programa núcleo (ya desazucarado)
    Returns:
        ClassModel con campos, métodos, vtables y tamaños
    """
    declared = _check_declarations(program)
    _check_hierarchy(declared)
    _check_types(declared)
    infos: Dict[str, ClassInfo] = {}
    for name in declared:
        _resolve(name, declared, infos)
    logger.info(f"Class model built for {len(infos)} classes")
    return ClassModel(program, infos)


def subtype(model: ClassModel, c1: str, c2: str) -> bool:
    return model.subtype(c1, c2)


def find_main(model: ClassModel) -> Tuple[str, ast.MethodDecl]:
    """The class that declares the nullary ``main`` method."""
    candidates = []
    for c in model.program.classes:
        m = c.method(MAIN_METHOD)
        if m is not None and not m.params:
            candidates.append((c.name, m))
    if not candidates:
        raise _error(ClassErrorKind.NO_MAIN, "no class declares a method main()")
    if len(candidates) > 1:
        names = ", ".join(name for name, _ in candidates)
        raise _error(ClassErrorKind.MULTIPLE_MAIN, f"main() is declared by more than one class: {names}",
                     candidates[1][1].location)
    return candidates[0]


def dump_layout(model: ClassModel) -> str:
    """Line-oriented report of every object layout and vtable."""
    lines = []
    for name in model.class_names:
        info = model.info(name)
        base = f" inherits {info.base}" if info.base else ""
        lines.append(f"class {name}{base} size {info.size}")
        lines.append("  offset 0: vtable")
        for index, f in enumerate(info.fields):
            lines.append(f"  offset {index + 1}: {f.type} {f.name}")
        for slot in info.vtable:
            lines.append(f"  slot {slot.index}: {slot.label}")
    return "\n".join(lines) + "\n"

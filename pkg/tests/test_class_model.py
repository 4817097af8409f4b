import sys
import os
import random

import pytest

# Add src to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.analysis import build_class_model, dump_layout, find_main
from src.core.constants import ClassErrorKind
from src.core.errors import ClassAnalysisError
from src.frontend import desugar, parse_source

SHAPES = """
class Shape
    int area
    method getArea(int out)
        out += area
    method scale(int k)
        skip

class Rectangle inherits Shape
    int a
    int b
    method getArea(int out)
        out += a * b

class Square inherits Rectangle
    int side
    method grow()
        side += 1
    method scale(int k)
        side += k

class Program
    int total
    method main()
        skip
"""


def _model(source):
    return build_class_model(desugar(parse_source(source)))


def _error_kind(source):
    with pytest.raises(ClassAnalysisError) as info:
        _model(source)
    return info.value.kind


def test_fields_are_prefixed_by_inherited_fields():
    model = _model(SHAPES)
    assert [f.name for f in model.fields("Square")] == ["area", "a", "b", "side"]
    assert model.info("Square").offset("area") == model.info("Shape").offset("area") == 1
    assert model.info("Square").offset("a") == model.info("Rectangle").offset("a") == 2
    assert model.size("Square") == 5


def test_vtable_slots_are_stable_and_overrides_replace_entries():
    model = _model(SHAPES)
    shape, square = model.vtable("Shape"), model.vtable("Square")
    assert [s.name for s in shape] == ["getArea", "scale"]
    assert [s.name for s in square] == ["getArea", "scale", "grow"]
    assert square[0].owner == "Rectangle"
    assert square[1].owner == "Square"
    assert model.lookup_method("Square", "getArea")[0] == "Rectangle"


def test_subtype_is_reflexive_and_transitive():
    model = _model(SHAPES)
    assert model.subtype("Square", "Square")
    assert model.subtype("Square", "Shape")
    assert not model.subtype("Shape", "Rectangle")
    assert not model.subtype("Program", "Shape")


@pytest.mark.parametrize("source,kind", [
    ("class A inherits B method main() skip", ClassErrorKind.UNKNOWN_BASE_CLASS),
    ("class A inherits B method main() skip\nclass B inherits A method q() skip",
     ClassErrorKind.INHERITANCE_CYCLE),
    ("class A method main() skip\nclass A method q() skip", ClassErrorKind.DUPLICATE_CLASS_NAME),
    ("class A method q(int x) skip method main() skip\nclass B inherits A method q(A x) skip",
     ClassErrorKind.OVERRIDE_SIGNATURE_MISMATCH),
    ("class A int x method main() skip\nclass B inherits A int x method q() skip",
     ClassErrorKind.FIELD_SHADOWS_INHERITED),
    ("class A int x int x method main() skip", ClassErrorKind.DUPLICATE_FIELD),
    ("class A method main() skip method main() skip", ClassErrorKind.DUPLICATE_METHOD),
    ("class A method q(int x, int x) skip method main() skip", ClassErrorKind.DUPLICATE_PARAMETER),
    ("class A C c method main() skip", ClassErrorKind.UNKNOWN_CLASS),
])
def test_hierarchy_errors(source, kind):
    assert _error_kind(source) is kind


def test_main_must_be_unique():
    with pytest.raises(ClassAnalysisError) as info:
        find_main(_model("class A method q() skip"))
    assert info.value.kind is ClassErrorKind.NO_MAIN
    with pytest.raises(ClassAnalysisError) as info:
        find_main(_model("class A method main() skip\nclass B method main() skip"))
    assert info.value.kind is ClassErrorKind.MULTIPLE_MAIN
    assert find_main(_model(SHAPES))[0] == "Program"


def test_dump_layout_lists_offsets_and_slots():
    report = dump_layout(_model(SHAPES))
    assert "class Square inherits Rectangle size 5" in report
    assert "  offset 4: int side" in report
    assert "  slot 1: Square::scale" in report


def _random_hierarchy(rng):
    """Three levels, each class adding fields and a mix of overrides and new methods."""
    lines, methods = [], []
    for level, name in enumerate(["A", "B", "C"]):
        base = f" inherits {'ABC'[level - 1]}" if level else ""
        lines.append(f"class {name}{base}")
        for k in range(rng.randint(0, 3)):
            lines.append(f"    int f{name}{k}")
        chosen = [m for m in methods if rng.random() < 0.5]
        fresh = [f"m{name}{k}" for k in range(rng.randint(1, 3))]
        for m in chosen + fresh:
            lines.append(f"    method {m}(int p)")
            lines.append("        p += 1")
        methods += fresh
    lines.append("    method main()")
    lines.append("        skip")
    return "\n".join(lines)


def test_prefixing_invariants_on_generated_hierarchies():
    rng = random.Random(1234)
    for _ in range(200):
        model = _model(_random_hierarchy(rng))
        for child, parent in [("B", "A"), ("C", "B"), ("C", "A")]:
            parent_info, child_info = model.info(parent), model.info(child)
            parent_fields = model.fields(parent)
            assert model.fields(child)[:len(parent_fields)] == parent_fields
            for f in parent_fields:
                assert child_info.offset(f.name) == parent_info.offset(f.name)
            for slot in model.vtable(parent):
                assert child_info.slot(slot.name).index == slot.index
            assert len(model.vtable(child)) >= len(model.vtable(parent))

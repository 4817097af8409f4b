import sys
import os

import pytest

# Add src to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.core.constants import Opcode
from src.core.errors import (
    BadRegister, DuplicateLabel, FinishBeforeStart, PalSyntaxError, UndefinedLabel, UnknownMnemonic,
)
from src.pisa import emit_pal, invert_instruction, make, parse_pal, patch_immediates, pop, push, resolve

PROGRAM = """
; a tiny loop
start:  START
        ADDI $4 3
top:    BNE $4 $0 body     ; fall through when done
        BRA done
body:   ADDI $4 -1
        BRA top
done:
        FINISH
l_out.x: DATA 0
"""


def test_parse_pal_reads_labels_operands_and_comments():
    instructions = parse_pal(PROGRAM)
    assert [i.opcode for i in instructions][:3] == [Opcode.START, Opcode.ADDI, Opcode.BNE]
    assert instructions[1].operands == (4, 3)
    assert instructions[2].operands == (4, 0, "body")
    assert instructions[2].comment == "fall through when done"
    # a label alone on its line belongs to the next instruction
    assert instructions[6].label == "done" and instructions[6].opcode is Opcode.FINISH
    assert instructions[7].label == "l_out.x"


def test_register_spellings():
    assert parse_pal("ADD r3 $31")[0].operands == (3, 31)
    assert parse_pal("xor $1 $2")[0].opcode is Opcode.XOR


def test_emit_then_parse_preserves_instructions():
    instructions = parse_pal(PROGRAM)
    assert parse_pal(emit_pal(instructions)) == instructions


def test_symbolic_immediates_are_kept_as_names():
    instructions = parse_pal("ADDI $4 l_out.x\nADDI $4 -l_out.x\nl_out.x: DATA 7")
    assert instructions[0].operands == (4, "l_out.x")
    assert instructions[1].operands == (4, "-l_out.x")


def test_unknown_mnemonic():
    with pytest.raises(UnknownMnemonic) as info:
        parse_pal("START\nJUMP $1\nFINISH")
    assert info.value.location.line == 2


@pytest.mark.parametrize("text", ["ADD $32 $1", "ADD $1 x7", "NEG 4"])
def test_bad_register(text):
    with pytest.raises(BadRegister):
        parse_pal(text)


def test_operand_count_and_dangling_label():
    with pytest.raises(PalSyntaxError):
        parse_pal("ADD $1")
    with pytest.raises(PalSyntaxError):
        parse_pal("START\nend:")


@pytest.mark.parametrize("text", ["XORI $4 2147483648", "DATA -2147483649", "BRA 99999999999"])
def test_immediates_must_fit_a_word(text):
    with pytest.raises(PalSyntaxError) as info:
        parse_pal(text)
    assert "32-bit" in str(info.value)


def test_word_boundaries_are_accepted():
    assert parse_pal("XORI $4 2147483647")[0].operands == (4, 2147483647)
    assert parse_pal("DATA -2147483648")[0].operands == (-2147483648,)


def test_resolve_turns_labels_into_offsets_and_addresses():
    program = resolve(parse_pal(PROGRAM))
    assert program.address_of("top") == 2
    assert program.instructions[2].operands == (4, 0, 2)   # top -> body
    assert program.instructions[5].operands == (-3,)      # body+1 -> top
    patched = resolve(parse_pal("ADDI $4 -cell\nSTART\nFINISH\ncell: DATA 0"))
    assert patched.instructions[0].operands == (4, -3)


def test_patch_immediates_leaves_branch_labels():
    patched = patch_immediates(parse_pal("BRA out\nADDI $4 cell\nout: FINISH\ncell: DATA 0"))
    assert patched[0].operands == ("out",)
    assert patched[1].operands == (4, 3)


def test_duplicate_and_undefined_labels():
    with pytest.raises(DuplicateLabel):
        resolve(parse_pal("a: START\na: FINISH"))
    with pytest.raises(UndefinedLabel):
        resolve(parse_pal("START\nBRA nowhere\nFINISH"))
    with pytest.raises(UndefinedLabel):
        resolve(parse_pal("START\nADDI $4 nowhere\nFINISH"))


def test_invert_instruction_pairs():
    assert invert_instruction(make(Opcode.ADD, 4, 5)) == make(Opcode.SUB, 4, 5)
    assert invert_instruction(make(Opcode.ADDI, 4, 7)) == make(Opcode.ADDI, 4, -7)
    assert invert_instruction(make(Opcode.ADDI, 4, "-cell")) == make(Opcode.ADDI, 4, "cell")
    assert invert_instruction(make(Opcode.RLV, 4, 5)) == make(Opcode.RRV, 4, 5)
    assert invert_instruction(make(Opcode.XOR, 4, 5)) == make(Opcode.XOR, 4, 5)
    assert invert_instruction(make(Opcode.EXCH, 4, 1)) == make(Opcode.EXCH, 4, 1)


def test_push_and_pop_are_mirror_images():
    pushed = push(7)
    popped = pop(7)
    assert [invert_instruction(i) for i in reversed(pushed)] == list(popped)


def test_instruction_checks_operand_count():
    with pytest.raises(ValueError):
        make(Opcode.ADD, 4)


def test_finish_must_follow_start():
    with pytest.raises(FinishBeforeStart):
        resolve(parse_pal("FINISH\nSTART"))
    with pytest.raises(FinishBeforeStart):
        resolve(parse_pal("cell: DATA 0\nFINISH\nADDI $4 1\nSTART\nFINISH"))
    assert len(resolve(parse_pal("cell: DATA 0\nSTART\nFINISH"))) == 3


def _offsets(program):
    return [(address, i.target) for address, i in enumerate(program.instructions) if i.opcode.is_branch]


@pytest.mark.parametrize("position", range(9))
def test_inserted_instruction_shifts_only_crossing_offsets(position):
    instructions = parse_pal(PROGRAM)
    before = _offsets(resolve(instructions))
    after = resolve(instructions[:position] + [make(Opcode.ADDI, 7, 0)] + instructions[position:])

    def shift(address):
        return address + (address >= position)

    assert _offsets(after) == [(shift(a), shift(a + offset) - shift(a)) for a, offset in before]


def test_label_only_line_changes_no_offsets():
    spare = PROGRAM.replace("        ADDI $4 3", "spare:\n        ADDI $4 3")
    assert _offsets(resolve(parse_pal(spare))) == _offsets(resolve(parse_pal(PROGRAM)))

"""
Generador del simulador de máquinas de Turing reversibles en ROOPL.

The transition table and the tape are both singly linked lists of objects
built by nested construct blocks in ``main``. ``Machine::simulate`` grows the
tape on demand, tries rule ``pc`` on every step (``incPc`` wraps around the
table), and once the final state is reached copies the tape into the two
output fields before the whole simulation runs again in reverse:

    result  bit i set iff cell i holds symbol 1
    cells   number of tape cells
"""
import logging
from typing import List, Sequence

from .harness import LEFT, RIGHT, SLASH, QuadrupleRule

logger = logging.getLogger(__name__)

INDENT = "    "

_CLASSES = """\
class Cell
    int symbol
    Cell next

    method constructor(int s)
        symbol += s

    method link(Cell n)
        next <=> n

    method length(int n)
        n += 1
        if next != nil then
            call next::length(n)
        fi next != nil

    method lookup(int p, int s)
        if p = 0 then
            s ^= symbol
        else
            p -= 1
            call next::lookup(p, s)
            p += 1
        fi p = 0

    method add(int p, int d)
        if p = 0 then
            symbol += d
        else
            p -= 1
            call next::add(p, d)
            p += 1
        fi p = 0

    method append(int n, Cell c)
        if n = 1 then
            next <=> c
        else
            n -= 1
            call next::append(n, c)
            n += 1
        fi n = 1

    method encode(int r, int w)
        if symbol = 1 then
            r += w
        fi symbol = 1
        if next != nil then
            local int v = w + w
                call next::encode(r, v)
            delocal int v = w + w
        fi next != nil

class Rule
    int q1
    int s1
    int s2
    int q2
    Rule next

    method constructor(int a, int b, int c, int d)
        q1 += a
        s1 += b
        s2 += c
        q2 += d

    method link(Rule n)
        next <=> n

    method get(int i, int a, int b, int c, int d)
        if i = 0 then
            a += q1
            b += s1
            c += s2
            d += q2
        else
            i -= 1
            call next::get(i, a, b, c, d)
            i += 1
        fi i = 0

class Machine
    int result
    int cells

    method incPc(int pc)
        pc += 1
        if pc = {rule_count} then
            pc -= {rule_count}
        fi pc = 0

    method inst(Cell tape, int pos, int state, int go, int q1, int s1, int s2, int q2)
        if go = 1 && s1 != {slash} then
            state += q2 - q1
            call tape::add(pos, s2 - s1)
        fi go = 1 && s1 != {slash}
        if go = 1 && s1 = {slash} then
            state += q2 - q1
            if s2 = {right} then
                pos += 1
            fi s2 = {right}
            if s2 = {left} then
                pos -= 1
            fi s2 = {left}
        fi go = 1 && s1 = {slash}

    method simulate(Cell tape, Rule rules, int pos, int state, int pc)
        local int len = 0
            call tape::length(len)
            if pos = len then
                construct Cell cell
                    call tape::append(len, cell)
                    call simulate(tape, rules, pos, state, pc)
                    uncall tape::append(len, cell)
                destruct cell
            else
                if pos < 0 then
                    construct Cell cell
                        call cell::link(tape)
                        tape <=> cell
                        pos += 1
                        call simulate(tape, rules, pos, state, pc)
                        pos -= 1
                        tape <=> cell
                        uncall cell::link(tape)
                    destruct cell
                else
                    call step(tape, rules, pos, state, pc)
                fi pos < 0
            fi pos = len
            uncall tape::length(len)
        delocal int len = 0

    method step(Cell tape, Rule rules, int pos, int state, int pc)
        local int q1 = 0, s1 = 0, s2 = 0, q2 = 0
            call incPc(pc)
            call rules::get(pc, q1, s1, s2, q2)
            local int symbol = 0
                call tape::lookup(pos, symbol)
                local int go = state = q1 && (s1 = symbol || s1 = {slash})
                    call inst(tape, pos, state, go, q1, s1, s2, q2)
                    if state = {final} then
                        local int w = 1
                            call tape::encode(result, w)
                        delocal int w = 1
                        call tape::length(cells)
                    else
                        call simulate(tape, rules, pos, state, pc)
                    fi state = {final}
                    uncall inst(tape, pos, state, go, q1, s1, s2, q2)
                delocal int go = state = q1 && (s1 = symbol || s1 = {slash})
                uncall tape::lookup(pos, symbol)
            delocal int symbol = 0
            uncall rules::get(pc, q1, s1, s2, q2)
            uncall incPc(pc)
        delocal int q1 = 0, s1 = 0, s2 = 0, q2 = 0

    method main()
"""


def _indent(lines: Sequence[str], depth: int = 1) -> List[str]:
    return [INDENT * depth + line for line in lines]


def _linked_blocks(class_name: str, prefix: str, values: Sequence[Sequence[int]],
                   inner: List[str]) -> List[str]:
    """
    Nested construct blocks for a linked list whose head is ``{prefix}0``.

    Element i is constructed outside element i-1 so that ``{prefix}i`` can be
    linked to ``{prefix}(i+1)`` for the duration of the inner blocks.
    """
    lines = inner
    for i, args in enumerate(values):
        name = f"{prefix}{i}"
        arglist = ", ".join(str(a) for a in args)
        if i + 1 < len(values):
            lines = [f"reversal {name}::link({prefix}{i + 1})"] + _indent(lines)
        lines = [f"construct {class_name} {name}({arglist})"] + _indent(lines) + [f"destruct {name}({arglist})"]
    return lines


def rtm_source(rules: Sequence[QuadrupleRule], tape: Sequence[int], start: int, final: int) -> str:
    """
    Genera el programa ROOPL que simula la máquina dada.

    Args:
        rules: tabla de transiciones (cuádruplas)
        tape: símbolos iniciales de la cinta, empezando en la posición de la cabeza
        start: estado inicial
        final: estado final
    Returns:
        Texto fuente ROOPL con clase main ``Machine``
    """
    if not rules:
        raise ValueError("A reversible Turing machine needs at least one rule")
    header = _CLASSES.format(rule_count=len(rules), slash=SLASH, left=LEFT, right=RIGHT, final=final)
    # the simulator needs a head cell even for an empty input tape
    cells = [[symbol] for symbol in tape] or [[0]]
    simulation = [
        f"local int pos = 0, state = {start}, pc = 0",
        INDENT + "call simulate(c0, r0, pos, state, pc)",
        f"delocal int pos = 0, state = {start}, pc = 0",
    ]
    body = _linked_blocks("Rule", "r", [tuple(r) for r in rules], _linked_blocks("Cell", "c", cells, simulation))
    logger.debug(f"Generated RTM program for {len(rules)} rules and {len(cells)} tape cells")
    return header + "\n".join(_indent(body, 2)) + "\n"

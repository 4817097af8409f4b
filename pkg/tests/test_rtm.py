import sys
import os

import pytest

# Add src to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.analysis import build_class_model, check_program
from src.frontend import desugar, parse_source
from src.rtm import (BLANK, FLIP_MACHINE, IDENTITY_MACHINE, INCREMENT_MACHINE, RIGHT, SLASH, QuadrupleRule,
                     TuringMachine, binary_view, decode_tape, harness_check_rtm, rtm_source, run_rtm_program,
                     simulate_tm)

CASES = [
    (INCREMENT_MACHINE, [1, 1, 1]),
    (INCREMENT_MACHINE, []),
    (IDENTITY_MACHINE, [1, 0, 1]),
    (FLIP_MACHINE, [1, 0, 1, 5]),
]


def _rules(machine):
    return [d.rule for d in harness_check_rtm(machine.rules)]


def test_example_machines_are_reversible():
    for machine in (INCREMENT_MACHINE, IDENTITY_MACHINE, FLIP_MACHINE):
        assert harness_check_rtm(machine.rules) == []


def test_forward_determinism_violation():
    machine = TuringMachine.of([(1, SLASH, RIGHT, 2), (1, 0, 1, 3)], start=1, final=3)
    assert _rules(machine) == ["ForwardDeterminism"]


def test_backward_determinism_violation():
    machine = TuringMachine.of([(1, 0, 1, 2), (3, 0, 1, 2)], start=1, final=2)
    assert _rules(machine) == ["BackwardDeterminism"]


def test_malformed_rules():
    assert _rules(TuringMachine.of([(1, SLASH, 7, 2)], 1, 2)) == ["MalformedRule"]
    assert _rules(TuringMachine.of([(1, 0, SLASH, 2)], 1, 2)) == ["MalformedRule"]


def test_quadruple_rule():
    rule = QuadrupleRule(2, SLASH, RIGHT, 1)
    assert rule.is_shift and str(rule) == "(2, 2, 4, 1)"
    assert not QuadrupleRule(1, 1, 1, 2).is_shift


def test_oracle():
    assert simulate_tm(INCREMENT_MACHINE, [1, 1, 1]) == [1, 1, 1, 1]
    assert simulate_tm(INCREMENT_MACHINE, []) == [1]
    assert simulate_tm(IDENTITY_MACHINE, [1, 0]) == [1, 0]
    assert simulate_tm(FLIP_MACHINE, [1, 0, 1, 5]) == [0, 1, 0, 5]


def test_oracle_stuck_machine():
    with pytest.raises(ValueError):
        simulate_tm(TuringMachine.of([(1, 1, 1, 2)], 1, 2), [0])


def test_tape_views():
    assert decode_tape({"result": 15, "cells": 4}) == [1, 1, 1, 1]
    assert decode_tape({"result": 2, "cells": 4}) == [0, 1, 0, 0]
    assert binary_view([0, 1, 0, 5]) == [0, 1, 0, 0]
    assert binary_view([BLANK]) == [0]


@pytest.mark.parametrize("machine,tape", CASES)
def test_generated_program_is_well_typed(machine, tape):
    program = desugar(parse_source(rtm_source(machine.rules, tape, machine.start, machine.final)))
    assert check_program(build_class_model(program), program) == []


def test_rtm_source_needs_rules():
    with pytest.raises(ValueError):
        rtm_source([], [1], 1, 2)


@pytest.mark.parametrize("backend", ["interpreter", "vm"])
@pytest.mark.parametrize("machine,tape", CASES)
def test_simulator_matches_oracle(machine, tape, backend):
    expected = binary_view(simulate_tm(machine, tape))
    assert run_rtm_program(machine, tape, backend=backend) == expected


def test_run_rejects_irreversible_machines_and_long_tapes():
    bad = TuringMachine.of([(1, 0, 1, 2), (3, 0, 1, 2)], start=1, final=2)
    with pytest.raises(ValueError):
        run_rtm_program(bad, [0])
    with pytest.raises(ValueError):
        run_rtm_program(IDENTITY_MACHINE, [1] * 32)

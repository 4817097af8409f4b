from .harness import (BLANK, FLIP_MACHINE, IDENTITY_MACHINE, INCREMENT_MACHINE, LEFT, RIGHT, SLASH,
                      QuadrupleRule, TuringMachine, binary_view, decode_tape, harness_check_rtm,
                      run_rtm_program, simulate_tm)
from .program import rtm_source

from .instructions import Instruction, invert_instruction, make, pop, push
from .pal import emit_pal, format_instruction, parse_pal
from .resolver import MachineProgram, patch_immediates, resolve

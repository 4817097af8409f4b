from .machine import MachineState, load, reverse_run, run, step

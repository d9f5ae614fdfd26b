# Register machine module
from armkit.machine.parser import format_instruction, parse_program
from armkit.machine.program import Configuration, MachineKind, Program, check_program
from armkit.machine.single_op import compile_to_single_op, constant_step_language, run_single_op
from armkit.machine.trace import trace
from armkit.machine.vm import run, run_deterministic, run_nondet, run_padded, run_unbounded

__all__ = [
    "format_instruction", "parse_program",
    "Configuration", "MachineKind", "Program", "check_program",
    "compile_to_single_op", "constant_step_language", "run_single_op",
    "trace",
    "run", "run_deterministic", "run_nondet", "run_padded", "run_unbounded",
]

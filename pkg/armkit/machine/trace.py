from typing import List, Optional, Tuple

from armkit.machine.program import Configuration, Program
from armkit.machine.vm import Inputs, run_deterministic, run_padded
from armkit.schemas import RunResult


def format_step(p: Program, k: int, conf: Configuration) -> str:
    regs = " | ".join(f"r{i}={v}" for i, v in enumerate(conf.registers, start=1))
    return f"step {k} | line {p.tag(conf.line)} | {regs}"


def trace(
    p: Program,
    inputs: Inputs,
    fuel: Optional[int] = None,
    seed: int = 0,
) -> Tuple[RunResult, List[str]]:
    """Deterministic run plus one line per step, registers as before the step."""
    lines: List[str] = []

    def observe(k: int, conf: Configuration) -> None:
        lines.append(format_step(p, k, conf))

    if p.kind.padded:
        word = inputs if isinstance(inputs, str) else inputs[0]
        result = run_padded(p, word, seed, fuel, observer=observe)
    else:
        result = run_deterministic(p, inputs, fuel, observer=observe)
    return result, lines

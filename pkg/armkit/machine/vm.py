"""Instruction-level execution of ARM programs.

Every executed instruction, halts included, costs one step. Application
outside an operation's domain and running off the last line both reject.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Union

from armkit import config
from armkit.automata.evaluation import enumerate_outputs, eval_function
from armkit.automata.relations import AutomaticFunction, AutomaticPredicate
from armkit.errors import (
    AlphabetError, BoundViolationError, FanoutOverflowError, MachineKindError, ResourceLimitError,
)
from armkit.machine.program import (
    Apply, AssignConst, Configuration, Copy, Goto, Halt, HaltKind, IfGoto, MachineKind,
    Program, Read, ReadAndBoost, Write,
)
from armkit.schemas import Outcome, RunResult

logger = logging.getLogger(__name__)

Inputs = Union[str, Sequence[str]]
Observer = Callable[[int, Configuration], None]

PAD_CHAR = "0"

_HALT_OUTCOME = {
    HaltKind.ACCEPT: Outcome.ACCEPTED,
    HaltKind.REJECT: Outcome.REJECTED,
    HaltKind.PLAIN: Outcome.OUTPUT,
}


@dataclass(frozen=True)
class Stop:
    outcome: Outcome
    output: Optional[str] = None


def _inputs(p: Program, inputs: Inputs) -> List[str]:
    words = [inputs] if isinstance(inputs, str) else list(inputs)
    for word in words:
        bad = set(word) - p.input_alphabet
        if bad:
            raise AlphabetError(f"input characters {sorted(bad)} outside the input alphabet")
    return words


def _require(p: Program, *kinds: MachineKind) -> None:
    if p.kind not in kinds:
        allowed = ", ".join(k.value for k in kinds)
        raise MachineKindError(f"{p.name or 'program'} is {p.kind.value}; expected {allowed}")


def _after(p: Program, conf: Configuration, line: int, *, registers=None, cursor=None, output=None):
    nxt = p.next_line(line)
    if nxt is None:
        return Stop(Outcome.REJECTED)
    return Configuration(
        line=nxt,
        registers=conf.registers if registers is None else registers,
        cursor=conf.cursor if cursor is None else cursor,
        output=conf.output if output is None else output,
    )


def _set(regs, reg: int, value: str):
    out = list(regs)
    out[reg - 1] = value
    return tuple(out)


def successors(
    p: Program,
    conf: Configuration,
    inputs: List[str],
    *,
    pad_length: int = 0,
    guess_budget: Optional[int] = None,
    cap: Optional[int] = None,
    witness: Optional[str] = None,
) -> Union[Stop, List[Configuration]]:
    """Execute the instruction at conf.line: a halt, or the next configurations.

    `witness` replaces the guess of an unbounded relation; it is kept only
    if the relation relates the arguments to it.
    """
    line = conf.line
    instr = p.lines[line]
    regs = conf.registers

    if isinstance(instr, Halt):
        return Stop(_HALT_OUTCOME[instr.kind], conf.output)
    if isinstance(instr, Goto):
        return [Configuration(instr.line, regs, conf.cursor, conf.output)]
    if isinstance(instr, IfGoto):
        pred: AutomaticPredicate = p.registry[instr.op]
        if pred.holds([regs[a - 1] for a in instr.args]):
            return [Configuration(instr.line, regs, conf.cursor, conf.output)]
        return _wrap(_after(p, conf, line))
    if isinstance(instr, Read):
        value = inputs[conf.cursor] if conf.cursor < len(inputs) else ""
        return _wrap(_after(p, conf, line, registers=_set(regs, instr.target, value),
                            cursor=conf.cursor + 1))
    if isinstance(instr, ReadAndBoost):
        value = inputs[conf.cursor] if conf.cursor < len(inputs) else ""
        new = _set(_set(regs, instr.target, value), instr.pad, PAD_CHAR * pad_length)
        return _wrap(_after(p, conf, line, registers=new, cursor=conf.cursor + 1))
    if isinstance(instr, Write):
        return _wrap(_after(p, conf, line, output=regs[instr.source - 1]))
    if isinstance(instr, AssignConst):
        return _wrap(_after(p, conf, line, registers=_set(regs, instr.target, instr.value)))
    if isinstance(instr, Copy):
        return _wrap(_after(p, conf, line, registers=_set(regs, instr.target, regs[instr.source - 1])))
    if isinstance(instr, Apply):
        op = p.registry[instr.op]
        args = [regs[a - 1] for a in instr.args]
        if isinstance(op, AutomaticFunction):
            out = eval_function(op, args)
            values = [] if out is None else [out]
            bound = op.bound
        elif op.bound is None and witness is not None:
            values = [witness] if op.contains(args, [witness]) else []
            bound = None
        elif op.bound is None:
            # an unbounded guess the simulation cannot list is a path it cannot take
            try:
                values = enumerate_outputs(op, args, cap=cap, max_length=guess_budget)
            except FanoutOverflowError as e:
                logger.warning("line %02d: %s within guess budget %s; path rejected", line, e, guess_budget)
                values = []
            bound = None
        else:
            values = enumerate_outputs(op, args, cap=cap)
            bound = op.bound
        if not values:
            return Stop(Outcome.REJECTED)
        if bound is not None:
            width = max((len(a) for a in args), default=0)
            for v in values:
                if abs(len(v) - width) > bound:
                    raise BoundViolationError(
                        f"{instr.op} changed r{instr.target} by more than {bound} characters"
                    )
        result = []
        for v in values:
            nxt = _after(p, conf, line, registers=_set(regs, instr.target, v))
            if isinstance(nxt, Stop):
                return nxt
            result.append(nxt)
        return result
    raise TypeError(f"unknown instruction {instr!r}")


def _wrap(nxt):
    return nxt if isinstance(nxt, Stop) else [nxt]


def _deterministic(
    p: Program,
    words: List[str],
    fuel: int,
    pad_length: int = 0,
    observer: Optional[Observer] = None,
) -> RunResult:
    conf = Configuration.start(p)
    steps = 0
    while True:
        if steps >= fuel:
            return RunResult(outcome=Outcome.FUEL_EXHAUSTED, det_steps=steps, explored=steps)
        steps += 1
        if observer is not None:
            observer(steps, conf)
        res = successors(p, conf, words, pad_length=pad_length)
        if isinstance(res, Stop):
            accepted = res.outcome == Outcome.ACCEPTED
            return RunResult(
                outcome=res.outcome,
                det_steps=steps,
                weak_steps=steps if accepted else None,
                strong_steps=steps if accepted else None,
                explored=steps,
                output=res.output if res.outcome == Outcome.OUTPUT else None,
            )
        conf = res[0]


def run_deterministic(
    p: Program,
    inputs: Inputs,
    fuel: Optional[int] = None,
    observer: Optional[Observer] = None,
) -> RunResult:
    _require(p, MachineKind.DARM)
    words = _inputs(p, inputs)
    if fuel is None:
        fuel = config.default_fuel(sum(len(w) for w in words))
    return _deterministic(p, words, fuel, observer=observer)


def search(start, expand: Callable, fuel: int, reverse: bool = False) -> RunResult:
    """Level-by-level search of a configuration graph.

    expand(node) returns a Stop or the successor nodes.
    """
    frontier = [start]
    visited = {start}
    depth = 0
    weak: Optional[int] = None
    strong: Optional[int] = None
    exhausted = False
    while frontier:
        if depth >= fuel:
            exhausted = True
            break
        depth += 1
        level: List[Configuration] = []
        for conf in frontier:
            res = expand(conf)
            if isinstance(res, Stop):
                if res.outcome == Outcome.ACCEPTED:
                    weak = depth if weak is None else weak
                    strong = depth
                continue
            for nxt in (reversed(res) if reverse else res):
                if nxt not in visited:
                    visited.add(nxt)
                    level.append(nxt)
        logger.debug("depth %d: frontier %d", depth, len(level))
        frontier = level
    if weak is not None:
        outcome = Outcome.ACCEPTED
    elif exhausted:
        outcome = Outcome.FUEL_EXHAUSTED
    else:
        outcome = Outcome.REJECTED
    return RunResult(
        outcome=outcome,
        det_steps=depth,
        weak_steps=weak,
        strong_steps=strong,
        explored=len(visited),
    )


def _explore(p: Program, words: List[str], fuel: int, guess_budget: Optional[int], reverse: bool) -> RunResult:
    def expand(conf: Configuration):
        return successors(p, conf, words, guess_budget=guess_budget)

    return search(Configuration.start(p), expand, fuel, reverse)


def _guesses_unbounded(p: Program, conf: Configuration) -> bool:
    instr = p.lines[conf.line]
    return isinstance(instr, Apply) and p.registry[instr.op].bound is None


def _follow(p: Program, words: List[str], fuel: int, witnesses: Sequence[str], reverse: bool) -> RunResult:
    """Search where the k-th unbounded guess must be witnesses[k]."""
    def expand(node):
        conf, used = node
        if not _guesses_unbounded(p, conf):
            res = successors(p, conf, words)
            return res if isinstance(res, Stop) else [(c, used) for c in res]
        if used >= len(witnesses):
            return Stop(Outcome.REJECTED)
        res = successors(p, conf, words, witness=witnesses[used])
        return res if isinstance(res, Stop) else [(c, used + 1) for c in res]

    return search((Configuration.start(p), 0), expand, fuel, reverse)


def run_nondet(p: Program, input: Inputs, fuel: Optional[int] = None, reverse: bool = False) -> RunResult:
    """Breadth-first search; `reverse` flips successor order (results must not change)."""
    _require(p, MachineKind.NARM, MachineKind.DARM)
    words = _inputs(p, input)
    if fuel is None:
        fuel = config.default_fuel(sum(len(w) for w in words))
    return _explore(p, words, fuel, None, reverse)


def run_unbounded(
    p: Program,
    input: Inputs,
    guess_budget: int,
    fuel: Optional[int] = None,
    reverse: bool = False,
    witnesses: Optional[Sequence[str]] = None,
) -> RunResult:
    """Like run_nondet; unbounded relations only guess outputs up to guess_budget.

    With `witnesses`, the unbounded guesses are taken from the list in
    order instead of being enumerated: the run checks one certificate.
    """
    _require(p, MachineKind.UNARM, MachineKind.NARM, MachineKind.DARM)
    words = _inputs(p, input)
    if fuel is None:
        fuel = config.default_fuel(sum(len(w) for w in words))
    if witnesses is not None:
        return _follow(p, words, fuel, list(witnesses), reverse)
    return _explore(p, words, fuel, guess_budget, reverse)


def boost_of(p: Program) -> ReadAndBoost:
    return next(i for i in p.lines.values() if isinstance(i, ReadAndBoost))


def pad_length(p: Program, word: str, adversary_seed: int) -> int:
    """Declared bound B plus a seeded extra in [0, B]."""
    bound = boost_of(p).bound(word)
    if bound > config.PAD_CEILING:
        raise ResourceLimitError(f"pad of {bound} characters exceeds ARM_PAD_CEILING={config.PAD_CEILING}")
    extra = random.Random(adversary_seed).randint(0, bound)
    return min(bound + extra, max(bound, config.PAD_CEILING))


def run_padded(
    p: Program,
    input: str,
    adversary_seed: int = 0,
    fuel: Optional[int] = None,
    observer: Optional[Observer] = None,
) -> RunResult:
    _require(p, MachineKind.PARM, MachineKind.EXPARM)
    words = _inputs(p, input)
    length = pad_length(p, words[0], adversary_seed)
    logger.debug("%s: pad length %d (seed %d)", p.name or "program", length, adversary_seed)
    if fuel is None:
        fuel = config.default_fuel(len(words[0]))
    return _deterministic(p, words, fuel, pad_length=length, observer=observer)


def run(p: Program, inputs: Inputs, fuel: Optional[int] = None, seed: int = 0,
        guess_budget: Optional[int] = None) -> RunResult:
    """Dispatch on the machine kind."""
    if p.kind == MachineKind.DARM:
        return run_deterministic(p, inputs, fuel)
    if p.kind == MachineKind.NARM:
        return run_nondet(p, inputs, fuel)
    if p.kind == MachineKind.UNARM:
        words = [inputs] if isinstance(inputs, str) else list(inputs)
        budget = guess_budget if guess_budget is not None else 4 * sum(len(w) for w in words) + 16
        return run_unbounded(p, inputs, budget, fuel)
    word = inputs if isinstance(inputs, str) else inputs[0]
    return run_padded(p, word, seed, fuel)

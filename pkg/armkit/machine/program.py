from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple, Union

from armkit.automata.convolution import PAD
from armkit.automata.relations import AutomaticFunction, AutomaticPredicate, AutomaticRelation
from armkit.errors import ParseError

Operation = Union[AutomaticFunction, AutomaticRelation, AutomaticPredicate]


class MachineKind(str, Enum):
    DARM = "DARM"
    NARM = "NARM"
    UNARM = "UNARM"
    PARM = "PARM"
    EXPARM = "ExpARM"

    @property
    def padded(self) -> bool:
        return self in (MachineKind.PARM, MachineKind.EXPARM)


class HaltKind(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    PLAIN = "plain"


# ---------- instructions ----------

@dataclass(frozen=True)
class Read:
    target: int


@dataclass(frozen=True)
class Write:
    source: int


@dataclass(frozen=True)
class AssignConst:
    target: int
    value: str


@dataclass(frozen=True)
class Copy:
    target: int
    source: int


@dataclass(frozen=True)
class Apply:
    target: int
    op: str
    args: Tuple[int, ...]


@dataclass(frozen=True)
class Goto:
    line: int


@dataclass(frozen=True)
class IfGoto:
    op: str
    args: Tuple[int, ...]
    line: int


@dataclass(frozen=True)
class Halt:
    kind: HaltKind


@dataclass(frozen=True)
class ReadAndBoost:
    """Input into `target`, 0^L with L at least the declared bound into `pad`.

    poly: bound p(m); exp: bound 2^p(m) * q(n). n is the input length, m is
    n as well unless `measure` names characters, then m counts those
    characters in the input.
    """
    target: int
    pad: int
    kind: str
    p: Tuple[int, ...]
    q: Tuple[int, ...] = (1,)
    measure: Optional[str] = None

    def bound(self, word: str) -> int:
        n = len(word)
        m = n if self.measure is None else sum(word.count(ch) for ch in self.measure)
        p_val = sum(c * m ** i for i, c in enumerate(self.p))
        if self.kind == "poly":
            return max(0, p_val)
        q_val = sum(c * n ** i for i, c in enumerate(self.q))
        return max(0, (2 ** p_val) * q_val)


Instruction = Union[Read, Write, AssignConst, Copy, Apply, Goto, IfGoto, Halt, ReadAndBoost]


def targets_of(instr: Instruction) -> List[int]:
    if isinstance(instr, (Goto, IfGoto)):
        return [instr.line]
    return []


# ---------- program ----------

@dataclass(frozen=True, eq=False)
class Program:
    kind: MachineKind
    alphabet: FrozenSet[str]
    input_alphabet: FrozenSet[str]
    register_count: int
    registry: Mapping[str, Operation]
    lines: Mapping[int, Instruction]
    name: str = ""
    source: Optional[str] = field(default=None, repr=False)

    @cached_property
    def line_numbers(self) -> List[int]:
        return sorted(self.lines)

    @cached_property
    def _successor(self) -> Dict[int, Optional[int]]:
        nums = self.line_numbers
        return {a: (nums[i + 1] if i + 1 < len(nums) else None) for i, a in enumerate(nums)}

    @property
    def first_line(self) -> int:
        return self.line_numbers[0]

    def next_line(self, line: int) -> Optional[int]:
        return self._successor[line]

    @cached_property
    def tag_width(self) -> int:
        return max(2, len(str(max(self.lines))))

    def tag(self, line: int) -> str:
        return str(line).zfill(self.tag_width)

    def control_successors(self, line: int) -> List[int]:
        instr = self.lines[line]
        if isinstance(instr, Halt):
            return []
        if isinstance(instr, Goto):
            return [instr.line]
        nxt = self.next_line(line)
        out = [nxt] if nxt is not None else []
        if isinstance(instr, IfGoto):
            out.append(instr.line)
        return out

    def in_loop(self, line: int) -> bool:
        """Whether the line can be executed twice in one run."""
        seen = set()
        stack = list(self.control_successors(line))
        while stack:
            node = stack.pop()
            if node == line:
                return True
            if node in seen:
                continue
            seen.add(node)
            stack.extend(self.control_successors(node))
        return False


def check_program(p: Program) -> Program:
    """Structural checks shared by the parser and the generators."""
    if not p.lines:
        raise ParseError("program has no instructions")
    if not p.input_alphabet <= p.alphabet:
        raise ParseError("input alphabet must be a subset of the machine alphabet")
    if PAD in p.alphabet:
        raise ParseError("'#' is reserved for padding and cannot be a machine symbol")
    boosts = 0
    for line_no in p.line_numbers:
        instr = p.lines[line_no]
        for target in targets_of(instr):
            if target not in p.lines:
                raise ParseError(f"goto({target}) has no such line", line_no)
        for reg in registers_of(instr):
            if not 1 <= reg <= p.register_count:
                raise ParseError(f"register r{reg} out of range", line_no)
        if isinstance(instr, (Apply, IfGoto)):
            op = p.registry.get(instr.op)
            if op is None:
                raise ParseError(f"unknown operation {instr.op!r}", line_no)
            _check_operation(p, instr, op, line_no)
        if isinstance(instr, ReadAndBoost):
            boosts += 1
            if not p.kind.padded:
                raise ParseError("read_and_boost needs a PARM or ExpARM machine", line_no)
            if instr.kind not in ("poly", "exp"):
                raise ParseError(f"unknown boost kind {instr.kind!r}", line_no)
            if p.kind == MachineKind.PARM and instr.kind != "poly":
                raise ParseError("PARM boosts are polynomial", line_no)
            if "0" not in p.alphabet:
                raise ParseError("padding needs '0' in the alphabet", line_no)
        if isinstance(instr, Read) and p.kind.padded:
            raise ParseError("padded machines read through read_and_boost", line_no)
    if p.kind.padded and boosts != 1:
        raise ParseError("padded machines have exactly one read_and_boost")
    return p


def registers_of(instr: Instruction) -> List[int]:
    if isinstance(instr, Read):
        return [instr.target]
    if isinstance(instr, Write):
        return [instr.source]
    if isinstance(instr, AssignConst):
        return [instr.target]
    if isinstance(instr, Copy):
        return [instr.target, instr.source]
    if isinstance(instr, Apply):
        return [instr.target, *instr.args]
    if isinstance(instr, IfGoto):
        return list(instr.args)
    if isinstance(instr, ReadAndBoost):
        return [instr.target, instr.pad]
    return []


def _check_operation(p: Program, instr, op: Operation, line_no: int) -> None:
    if isinstance(instr, IfGoto):
        if not isinstance(op, AutomaticPredicate):
            raise ParseError(f"{instr.op!r} is not a predicate", line_no)
        if op.arity != len(instr.args):
            raise ParseError(f"{instr.op!r} takes {op.arity} arguments", line_no)
        return
    if isinstance(op, AutomaticPredicate):
        raise ParseError(f"predicate {instr.op!r} cannot be assigned", line_no)
    relation = op.relation if isinstance(op, AutomaticFunction) else op
    if relation.arity != len(instr.args):
        raise ParseError(f"{instr.op!r} takes {relation.arity} arguments", line_no)
    if relation.coarity != 1:
        raise ParseError(f"{instr.op!r} must have a single output track", line_no)
    if p.kind in (MachineKind.DARM, MachineKind.PARM, MachineKind.EXPARM):
        if not (isinstance(op, AutomaticFunction) and op.functional_certificate):
            raise ParseError(f"{instr.op!r} is not a certified automatic function", line_no)
        if not relation.bounded:
            raise ParseError(f"{instr.op!r} changes lengths without bound", line_no)
    elif p.kind == MachineKind.NARM and not relation.bounded:
        raise ParseError(f"{instr.op!r} is unbounded; NARM needs bounded relations", line_no)


@dataclass(frozen=True)
class Configuration:
    """Machine snapshot; cursor counts consumed inputs, output is the last write."""
    line: int
    registers: Tuple[str, ...]
    cursor: int = 0
    output: Optional[str] = None

    @classmethod
    def start(cls, p: Program) -> "Configuration":
        return cls(line=p.first_line, registers=("",) * p.register_count)

    def with_register(self, reg: int, value: str, line: int) -> "Configuration":
        regs = list(self.registers)
        regs[reg - 1] = value
        return Configuration(line, tuple(regs), self.cursor, self.output)

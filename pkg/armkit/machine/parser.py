"""Text DSL for ARM programs.

    machine DARM
    alphabet 0 1
    use is_odd = builtin(ltwo.is_odd)
    01: read(r1)
    02: if is_odd(r1) then goto(05)
    ...

`alphabet` and `input` take either whitespace-separated characters or one
JSON string literal (needed when the alphabet contains a blank). Lines
starting with ';' are comments.
"""
from __future__ import annotations

import json
import logging
import re
from pathlib import Path
from typing import Callable, Dict, List, Optional, Set, Tuple

from armkit.automata.automaton import load_automaton
from armkit.automata.relations import AutomaticPredicate, certify, make_relation
from armkit.errors import ArmError, ParseError
from armkit.machine.program import (
    Apply, AssignConst, Copy, Goto, Halt, HaltKind, IfGoto, Instruction, MachineKind,
    Operation, Program, Read, ReadAndBoost, Write, check_program, registers_of,
)

logger = logging.getLogger(__name__)

Resolver = Callable[[str], Operation]

_REG = r"r(\d+)"
_NAME = r"[A-Za-z_][\w.]*"
_ARGS = r"\s*(r\d+(?:\s*,\s*r\d+)*)?\s*"

_LABEL = re.compile(r"^(\d+)\s*:\s*(.*)$")
_SPLIT = re.compile(r";\s*(?=\d+\s*:)")
_READ = re.compile(rf"^read\(\s*{_REG}\s*\)$")
_WRITE = re.compile(rf"^write\(\s*{_REG}\s*\)$")
_GOTO = re.compile(r"^goto\(\s*(\d+)\s*\)$")
_IF = re.compile(rf"^if\s+({_NAME})\({_ARGS}\)\s+then\s+goto\(\s*(\d+)\s*\)$")
_CONST = re.compile(rf"^{_REG}\s*<-\s*(\".*\")$")
_COPY = re.compile(rf"^{_REG}\s*<-\s*{_REG}$")
_APPLY = re.compile(rf"^{_REG}\s*<-\s*({_NAME})\({_ARGS}\)$")
_BOOST = re.compile(rf"^read_and_boost\(\s*{_REG}\s*,\s*{_REG}\s*,\s*(poly|exp)\s*(?:,(.*))?\)$")
_USE = re.compile(rf"^use\s+({_NAME})\s*=\s*(builtin|file)\((.*)\)$")

_HALTS = {
    "halt_accept": HaltKind.ACCEPT,
    "halt_reject": HaltKind.REJECT,
    "halt": HaltKind.PLAIN,
}


def _registers(group: Optional[str]) -> Tuple[int, ...]:
    if not group:
        return ()
    return tuple(int(tok.strip()[1:]) for tok in group.split(","))


def _charset(rest: str, line_no: int) -> Set[str]:
    rest = rest.strip()
    if rest.startswith('"'):
        try:
            return set(json.loads(rest))
        except json.JSONDecodeError as e:
            raise ParseError(f"bad alphabet literal: {e}", line_no)
    return {ch for tok in rest.split() for ch in tok}


def _boost(m: re.Match, line_no: int) -> ReadAndBoost:
    target, pad, kind, rest = int(m.group(1)), int(m.group(2)), m.group(3), m.group(4)
    p: List[int] = []
    q: List[int] = [1]
    measure = None
    for item in (t.strip() for t in (rest or "").split(",") if t.strip()):
        try:
            if item.startswith("p:"):
                p = [int(v) for v in item[2:].split(":")]
            elif item.startswith("q:"):
                q = [int(v) for v in item[2:].split(":")]
            elif item.startswith("over:"):
                measure = item[5:]
            else:
                p.append(int(item))
        except ValueError:
            raise ParseError(f"bad read_and_boost coefficient {item!r}", line_no)
    if not p:
        raise ParseError("read_and_boost needs coefficients", line_no)
    return ReadAndBoost(target, pad, kind, tuple(p), tuple(q), measure)


def parse_instruction(body: str, line_no: int) -> Instruction:
    body = body.strip()
    if body in _HALTS:
        return Halt(_HALTS[body])
    if m := _READ.match(body):
        return Read(int(m.group(1)))
    if m := _WRITE.match(body):
        return Write(int(m.group(1)))
    if m := _GOTO.match(body):
        return Goto(int(m.group(1)))
    if m := _IF.match(body):
        return IfGoto(m.group(1), _registers(m.group(2)), int(m.group(3)))
    if m := _CONST.match(body):
        try:
            value = json.loads(m.group(2))
        except json.JSONDecodeError as e:
            raise ParseError(f"bad string literal: {e}", line_no)
        return AssignConst(int(m.group(1)), value)
    if m := _COPY.match(body):
        return Copy(int(m.group(1)), int(m.group(2)))
    if m := _APPLY.match(body):
        return Apply(int(m.group(1)), m.group(2), _registers(m.group(3)))
    if m := _BOOST.match(body):
        return _boost(m, line_no)
    raise ParseError(f"cannot parse instruction {body!r}", line_no)


def _default_resolver(name: str) -> Operation:
    from armkit.programs.builtins import resolve_builtin

    return resolve_builtin(name)


def parse_program(
    text: str,
    resolver: Optional[Resolver] = None,
    registry: Optional[Dict[str, Operation]] = None,
    base_dir: Optional[Path] = None,
    name: str = "",
    allow_files: bool = True,
) -> Program:
    """Parse DSL text into a checked Program.

    `registry` supplies operations directly (generated programs); `use`
    headers add to it. File automata become predicates when used in an
    `if`, relations of the right arity otherwise. With allow_files=False a
    file() header is a parse error.
    """
    resolver = resolver or _default_resolver
    kind = MachineKind.DARM
    alphabet: Set[str] = set()
    input_alphabet: Optional[Set[str]] = None
    register_count: Optional[int] = None
    ops: Dict[str, Operation] = dict(registry or {})
    files: Dict[str, Tuple[str, int]] = {}
    lines: Dict[int, Instruction] = {}

    for text_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith(";"):
            continue
        keyword, _, rest = stripped.partition(" ")
        if keyword == "machine":
            try:
                kind = MachineKind(rest.strip())
            except ValueError:
                raise ParseError(f"unknown machine kind {rest.strip()!r}", text_no)
            continue
        if keyword == "alphabet":
            alphabet |= _charset(rest, text_no)
            continue
        if keyword == "input":
            input_alphabet = _charset(rest, text_no)
            continue
        if keyword == "registers":
            try:
                register_count = int(rest)
            except ValueError:
                raise ParseError(f"bad register count {rest!r}", text_no)
            continue
        if keyword == "use":
            m = _USE.match(stripped)
            if not m:
                raise ParseError(f"cannot parse header {stripped!r}", text_no)
            op_name, source, arg = m.group(1), m.group(2), m.group(3).strip()
            if source == "builtin":
                try:
                    ops[op_name] = resolver(arg)
                except ArmError as e:
                    raise ParseError(str(e), text_no)
            elif not allow_files:
                raise ParseError(f"use {op_name}: file() operations are not available here", text_no)
            else:
                try:
                    files[op_name] = (json.loads(arg), text_no)
                except json.JSONDecodeError:
                    raise ParseError(f"file() takes a quoted path, got {arg}", text_no)
            continue
        for segment in _SPLIT.split(stripped):
            m = _LABEL.match(segment.strip())
            if not m:
                raise ParseError(f"expected 'NN: instruction', got {segment!r}", text_no)
            line_no = int(m.group(1))
            if line_no in lines:
                raise ParseError(f"duplicate line {m.group(1)}", text_no)
            lines[line_no] = parse_instruction(m.group(2), text_no)

    for op_name, (path, text_no) in files.items():
        ops[op_name] = _load_file_op(op_name, path, text_no, lines, kind, base_dir)

    for instr in lines.values():
        for ch in getattr(instr, "value", ""):
            alphabet.add(ch)
    for op in ops.values():
        alphabet |= op.automaton.alphabet
    if register_count is None:
        used = [r for instr in lines.values() for r in registers_of(instr)]
        register_count = max(used, default=1)
    program = Program(
        kind=kind,
        alphabet=frozenset(alphabet),
        input_alphabet=frozenset(input_alphabet if input_alphabet is not None else alphabet),
        register_count=register_count,
        registry=ops,
        lines=lines,
        name=name,
        source=text,
    )
    check_program(program)
    logger.debug("parsed %s: %d lines, %d ops", name or "program", len(lines), len(ops))
    return program


def _load_file_op(op_name, path, text_no, lines, kind, base_dir) -> Operation:
    full = Path(path) if base_dir is None else Path(base_dir) / path
    try:
        aut = load_automaton(full.read_text())
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}", text_no)
    except ArmError as e:
        raise ParseError(f"{path}: {e}", text_no)
    uses = [i for i in lines.values() if getattr(i, "op", None) == op_name]
    if any(isinstance(i, IfGoto) for i in uses):
        return AutomaticPredicate(automaton=aut, name=op_name)
    arity = len(uses[0].args) if uses else aut.track_count - 1
    try:
        relation = make_relation(aut, arity=arity, name=op_name)
    except ArmError as e:
        raise ParseError(f"{path}: {e}", text_no)
    if kind in (MachineKind.DARM, MachineKind.PARM, MachineKind.EXPARM):
        return certify(relation)
    return relation


def _regs(args) -> str:
    return ", ".join(f"r{a}" for a in args)


def format_instruction(instr: Instruction) -> str:
    """DSL text of one instruction; parse_instruction reads it back."""
    if isinstance(instr, Halt):
        return next(word for word, kind in _HALTS.items() if kind == instr.kind)
    if isinstance(instr, Read):
        return f"read(r{instr.target})"
    if isinstance(instr, Write):
        return f"write(r{instr.source})"
    if isinstance(instr, Goto):
        return f"goto({instr.line:02d})"
    if isinstance(instr, IfGoto):
        return f"if {instr.op}({_regs(instr.args)}) then goto({instr.line:02d})"
    if isinstance(instr, AssignConst):
        return f"r{instr.target} <- {json.dumps(instr.value)}"
    if isinstance(instr, Copy):
        return f"r{instr.target} <- r{instr.source}"
    if isinstance(instr, Apply):
        return f"r{instr.target} <- {instr.op}({_regs(instr.args)})"
    items = ["p:" + ":".join(map(str, instr.p)), "q:" + ":".join(map(str, instr.q))]
    if instr.measure is not None:
        items.append(f"over:{instr.measure}")
    return f"read_and_boost(r{instr.target}, r{instr.pad}, {instr.kind}, {', '.join(items)})"

"""One relation G that performs a whole program step.

G reads the convolution of the line tag, the input (when the program
reads), the output (when it writes) and r1..rn, and yields the same tracks
after one instruction. Each line contributes clauses: guards on the input
tracks plus one component per output track. G is their union.

Clauses are evaluated component-wise, which is exactly how the union of
synchronized products acts on a single tuple; `materialize` builds the
explicit automaton for programs small enough to afford it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Tuple, Union

from armkit import config
from armkit.automata.automaton import TrackAutomaton
from armkit.automata.convolution import PAD
from armkit.automata.evaluation import enumerate_outputs, eval_function
from armkit.automata.operations import (
    CombineMode, boolean_combine, determinize_minimize, eliminate_silent, project,
    synchronized_product,
)
from armkit.automata.relations import (
    AutomaticFunction, AutomaticPredicate, AutomaticRelation, constant_relation,
    identity_relation, pair_relation, validate_relation,
)
from armkit.errors import AlphabetError, CompileError, ResourceLimitError
from armkit.machine.program import (
    Apply, AssignConst, Copy, Goto, Halt, HaltKind, IfGoto, MachineKind, Program, Read,
    ReadAndBoost, Write,
)
from armkit.machine.vm import Stop, search
from armkit.schemas import Outcome, RunResult

logger = logging.getLogger(__name__)

Tracks = Tuple[str, ...]

_TERMINAL = {"A": Outcome.ACCEPTED, "R": Outcome.REJECTED, "H": Outcome.OUTPUT}


@dataclass(frozen=True)
class Layout:
    """Track positions on one side of G."""
    registers: int
    has_input: bool
    has_output: bool

    @property
    def width(self) -> int:
        return 1 + self.has_input + self.has_output + self.registers

    @property
    def input(self) -> Optional[int]:
        return 1 if self.has_input else None

    @property
    def output(self) -> Optional[int]:
        return 1 + self.has_input if self.has_output else None

    def reg(self, k: int) -> int:
        return self.has_input + self.has_output + k


@dataclass(frozen=True)
class Guard:
    """Predicate (or its negation, or undefinedness of an operation) on input tracks."""
    op: Union[AutomaticPredicate, AutomaticFunction, AutomaticRelation]
    tracks: Tuple[int, ...]
    negate: bool = False


@dataclass(frozen=True)
class Component:
    """Output track <- op(input tracks); `extra` caps the length growth."""
    target: int
    op: Union[AutomaticFunction, AutomaticRelation]
    tracks: Tuple[int, ...]
    extra: int = 0


@dataclass(frozen=True)
class Clause:
    line: int
    guards: Tuple[Guard, ...]
    components: Tuple[Component, ...]


@dataclass(frozen=True, eq=False)
class SingleOpRelation:
    program: Program
    layout: Layout
    clauses: Tuple[Clause, ...]
    alphabet: frozenset
    _index: Dict[str, List[Clause]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for clause in self.clauses:
            self._index.setdefault(self.program.tag(clause.line), []).append(clause)

    @property
    def arity(self) -> int:
        return self.layout.width

    @property
    def coarity(self) -> int:
        return self.layout.width

    def start(self, word: str) -> Tracks:
        tracks = [""] * self.layout.width
        tracks[0] = self.program.tag(self.program.first_line)
        if self.layout.has_input:
            tracks[self.layout.input] = word
        return tuple(tracks)

    def apply(self, tracks: Tracks, cap: Optional[int] = None, guess_budget: Optional[int] = None) -> List[Tracks]:
        """Every G-successor of the tuple; empty for terminal tags."""
        results: List[Tracks] = []
        for clause in self._index.get(tracks[0], ()):
            if not all(_guard_holds(g, tracks, guess_budget) for g in clause.guards):
                continue
            choices: List[List[str]] = [[] for _ in range(self.layout.width)]
            for comp in clause.components:
                args = [tracks[t] for t in comp.tracks]
                choices[comp.target] = _outputs(comp, args, cap, guess_budget)
            if any(not c for c in choices):
                continue
            combos: List[Tracks] = [()]
            for options in choices:
                combos = [c + (o,) for c in combos for o in options]
            results.extend(combos)
        return results

    def materialize(self) -> AutomaticRelation:
        """The explicit automaton of G over 2 * width tracks."""
        return _materialize(self)

    @cached_property
    def relation(self) -> AutomaticRelation:
        return self.materialize()


def _guard_holds(g: Guard, tracks: Tracks, guess_budget) -> bool:
    args = [tracks[t] for t in g.tracks]
    if isinstance(g.op, AutomaticPredicate):
        held = g.op.holds(args)
    elif isinstance(g.op, AutomaticFunction):
        held = eval_function(g.op, args) is not None
    else:
        held = bool(enumerate_outputs(g.op, args, max_length=_budget(g.op, args, guess_budget)))
    return held != g.negate


def _budget(op, args, guess_budget) -> Optional[int]:
    if op.bound is not None:
        return None
    return guess_budget


def _outputs(comp: Component, args: List[str], cap, guess_budget) -> List[str]:
    width = max((len(a) for a in args), default=0)
    if isinstance(comp.op, AutomaticFunction):
        limit = None if comp.op.bound is not None else width + comp.extra
        out = eval_function(comp.op, args, max_length=limit)
        return [] if out is None else [out]
    budget = _budget(comp.op, args, guess_budget)
    return list(enumerate_outputs(comp.op, args, cap=cap, max_length=budget))


# ---------- compilation ----------

def _layout(p: Program) -> Layout:
    has_read = any(isinstance(i, Read) for i in p.lines.values())
    has_write = any(isinstance(i, Write) for i in p.lines.values())
    return Layout(p.register_count, has_read, has_write)


def compile_to_single_op(p: Program) -> SingleOpRelation:
    if p.kind not in (MachineKind.DARM, MachineKind.NARM):
        raise CompileError(f"single-op form needs a DARM or NARM program, got {p.kind.value}")
    reads = [n for n, i in p.lines.items() if isinstance(i, Read)]
    if len(reads) > 1:
        raise CompileError("single-op form supports one read; hoist reads into a prologue")
    for n, instr in p.lines.items():
        if isinstance(instr, ReadAndBoost):
            raise CompileError(f"line {n}: read_and_boost has no single-op form")
        if isinstance(instr, (Read, Write)) and p.in_loop(n):
            raise CompileError(f"line {n}: input/output inside a loop")

    layout = _layout(p)
    w = p.tag_width
    alphabet = frozenset(p.alphabet) | set("0123456789ARH")
    ident = identity_relation(p.alphabet)
    reject_tag = "R" * w

    def keep(*skip: int) -> List[Component]:
        return [Component(t, ident, (t,)) for t in range(1, layout.width) if t not in skip]

    def tag_to(line: int, dst: Optional[int]) -> Component:
        target = p.tag(dst) if dst is not None else reject_tag
        return Component(0, pair_relation(p.tag(line), target, alphabet), (0,))

    clauses: List[Clause] = []
    for line in p.line_numbers:
        instr = p.lines[line]
        nxt = p.next_line(line)
        if isinstance(instr, Halt):
            terminal = {HaltKind.ACCEPT: "A", HaltKind.REJECT: "R", HaltKind.PLAIN: "H"}[instr.kind] * w
            comp = Component(0, pair_relation(p.tag(line), terminal, alphabet), (0,))
            clauses.append(Clause(line, (), (comp, *keep())))
        elif isinstance(instr, Goto):
            clauses.append(Clause(line, (), (tag_to(line, instr.line), *keep())))
        elif isinstance(instr, IfGoto):
            op = p.registry[instr.op]
            tracks = tuple(layout.reg(a) for a in instr.args)
            clauses.append(Clause(line, (Guard(op, tracks),), (tag_to(line, instr.line), *keep())))
            clauses.append(Clause(line, (Guard(op, tracks, True),), (tag_to(line, nxt), *keep())))
        elif isinstance(instr, Read):
            t = layout.reg(instr.target)
            comp = Component(t, ident, (layout.input,))
            clauses.append(Clause(line, (), (tag_to(line, nxt), comp, *keep(t))))
        elif isinstance(instr, Write):
            comp = Component(layout.output, ident, (layout.reg(instr.source),))
            clauses.append(Clause(line, (), (tag_to(line, nxt), comp, *keep(layout.output))))
        elif isinstance(instr, AssignConst):
            t = layout.reg(instr.target)
            comp = Component(t, constant_relation(instr.value, p.alphabet), (t,), extra=len(instr.value))
            clauses.append(Clause(line, (), (tag_to(line, nxt), comp, *keep(t))))
        elif isinstance(instr, Copy):
            t = layout.reg(instr.target)
            comp = Component(t, ident, (layout.reg(instr.source),))
            clauses.append(Clause(line, (), (tag_to(line, nxt), comp, *keep(t))))
        elif isinstance(instr, Apply):
            op = p.registry[instr.op]
            t = layout.reg(instr.target)
            tracks = tuple(layout.reg(a) for a in instr.args)
            comp = Component(t, op, tracks, extra=op.bound or 0)
            clauses.append(Clause(line, (), (tag_to(line, nxt), comp, *keep(t))))
            clauses.append(Clause(line, (Guard(op, tracks, True),), (tag_to(line, None), *keep())))
    g = SingleOpRelation(program=p, layout=layout, clauses=tuple(clauses), alphabet=frozenset(alphabet))
    logger.debug("compiled %s: %d clauses over %d tracks", p.name or "program", len(clauses), layout.width)
    return g


def _materialize(g: SingleOpRelation) -> AutomaticRelation:
    m = g.layout.width
    parts: List[TrackAutomaton] = []
    for clause in g.clauses:
        comps = []
        for guard in clause.guards:
            comps.append((_guard_automaton(guard, g.program.alphabet), list(guard.tracks)))
        for comp in clause.components:
            tracks = list(comp.tracks) + [m + comp.target]
            if len(set(tracks)) != len(tracks):
                raise CompileError(f"line {clause.line}: repeated register in one operation")
            comps.append((comp.op.automaton, tracks))
        parts.append(synchronized_product(comps, 2 * m, g.alphabet))
        if sum(len(a.states) for a in parts) > config.STATE_CEILING:
            raise ResourceLimitError("G has too many states to materialize")
    union = parts[0]
    for part in parts[1:]:
        union = boolean_combine(union, part, CombineMode.UNION)
    report = validate_relation(union, m)
    logger.info("materialized G: %d states, %d transitions", len(union.states), len(union.transitions))
    return AutomaticRelation(automaton=union, bound=report.bound, arity=m, name="G")


def _guard_automaton(guard: Guard, alphabet) -> TrackAutomaton:
    if isinstance(guard.op, AutomaticPredicate):
        aut = guard.op.automaton
    else:
        aut = project(guard.op.automaton, range(guard.op.arity))
    # complement relative to the whole machine alphabet
    aut = TrackAutomaton.build(aut.track_count, alphabet, aut.initial, aut.accepting, aut.transitions)
    return boolean_combine(aut, None, CombineMode.COMPLEMENT) if guard.negate else aut


# ---------- running ----------

def _outcome(g: SingleOpRelation, tracks: Tracks) -> Optional[Stop]:
    tag = tracks[0]
    kind = _TERMINAL.get(tag[:1])
    if kind is None or tag != tag[0] * g.program.tag_width:
        return None
    out = tracks[g.layout.output] if g.layout.has_output else ""
    return Stop(kind, out)


def run_single_op(
    g: SingleOpRelation,
    p: Program,
    input: str,
    fuel: Optional[int] = None,
) -> RunResult:
    """Iterate G from (first tag, input, empty registers); one application is one step."""
    if fuel is None:
        fuel = config.default_fuel(len(input))
    bad = set(input) - p.input_alphabet
    if bad:
        raise AlphabetError(f"input characters {sorted(bad)} outside the input alphabet")

    def expand(tracks: Tracks):
        succ = g.apply(tracks)
        stops = [s for s in (_outcome(g, t) for t in succ) if s is not None]
        if stops:
            accepted = [s for s in stops if s.outcome == Outcome.ACCEPTED]
            return accepted[0] if accepted else stops[0]
        return succ if succ else Stop(Outcome.REJECTED)

    if p.kind == MachineKind.NARM:
        return search(g.start(input), expand, fuel)

    tracks = g.start(input)
    steps = 0
    while True:
        if steps >= fuel:
            return RunResult(outcome=Outcome.FUEL_EXHAUSTED, det_steps=steps, explored=steps)
        steps += 1
        res = expand(tracks)
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
        tracks = res[0]


# ---------- constant-step languages ----------

_INIT = "init"
_FIN = "fin"


def constant_step_language(p: Program, k: int) -> TrackAutomaton:
    """Minimal DFA of the inputs p accepts within k steps after its first read."""
    first = p.lines[p.first_line]
    if p.kind != MachineKind.DARM or not isinstance(first, Read):
        raise CompileError("constant_step_language needs a DARM program starting with read")
    g = compile_to_single_op(p)
    rel = g.relation
    m = g.layout.width
    w = p.tag_width
    start_tag = p.tag(p.first_line)
    accept_tag = "A" * w
    index = rel.io_index
    aut_initial = rel.automaton.initial
    aut_accepting = rel.automaton.accepting
    pad_col = (PAD,) * m
    sigma = sorted(p.input_alphabet)

    def first_column(t: int, letter: Optional[str]) -> Tuple[str, ...]:
        col = [PAD] * m
        if t < w:
            col[0] = start_tag[t]
        if letter is not None:
            col[g.layout.input] = letter
        return tuple(col)

    def links(states, col) -> Iterable[Tuple[Tuple, Tuple[str, ...]]]:
        """Columns of c_1..c_j chained through G from c_0's column."""
        if not states:
            yield (), col
            return
        head, rest = states[0], states[1:]
        options = []
        if head == _FIN:
            if col == pad_col:
                options.append((pad_col, _FIN))
        else:
            sources = aut_initial if head == _INIT else (head,)
            for src in sources:
                options.extend(index.get((src, col), ()))
            if col == pad_col and head != _INIT and head in aut_accepting:
                options.append((pad_col, _FIN))
        for out, dst in options:
            for tail, last in links(rest, out):
                yield (dst,) + tail, last

    initial = []
    accepting = []
    moves = []
    seen = set()
    queue = []
    for j in range(1, k + 2):
        node = (0, False, (_INIT,) * j, True)
        initial.append(node)
        seen.add(node)
        queue.append(node)
    while queue:
        node = queue.pop()
        t, ended, states, tag_ok = node
        if all(s == _FIN for s in states):
            if tag_ok:
                accepting.append(node)
            continue
        steps = [(None, first_column(t, None))]
        if not ended:
            steps += [((ch,), first_column(t, ch)) for ch in sigma]
        for sym, col in steps:
            for new_states, last in links(states, col):
                ok = tag_ok and (t >= w or last[0] == accept_tag[t])
                dst = (min(t + 1, w), ended or sym is None, new_states, ok)
                moves.append((node, sym, dst))
                if dst not in seen:
                    seen.add(dst)
                    queue.append(dst)
                    if len(seen) > config.STATE_CEILING:
                        raise ResourceLimitError(f"{k}-step language exceeds ARM_STATE_CEILING")
    nfa = eliminate_silent(1, sigma, initial, accepting, moves)
    dfa = determinize_minimize(nfa)
    logger.info("%d-step language of %s: %d states", k, p.name or "program", len(dfa.states))
    return dfa

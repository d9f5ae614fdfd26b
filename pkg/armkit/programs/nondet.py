"""Nondeterministic library programs: NONPALINDROME, 3SAT, Greibach grammars."""
import json
import logging
from string import ascii_uppercase
from typing import Dict, List, Tuple

from armkit import config
from armkit.errors import GenerationError
from armkit.machine.parser import parse_program
from armkit.machine.program import Program
from armkit.programs.builtins import builtin
from armkit.programs.instances import GreibachGrammar
from armkit.programs.passes import RTL, absent, guess, rewrite, scan

logger = logging.getLogger(__name__)

# ---------- NONPALINDROME ----------

BITS = "01"
WITNESS = "0123"

NONPALINDROME_SOURCE = """\
; w is not a palindrome: guess 0^i 3 1^j 3 2^i marking two mirrored positions that differ
machine NARM
input 0 1
use guess_witness = builtin(nonpal.guess_witness)
use no_counters = builtin(nonpal.no_counters)
use parities_differ = builtin(nonpal.parities_differ)
use halve = builtin(nonpal.halve)
use marks_differ = builtin(nonpal.marks_differ)
01: read(r1)
02: r2 <- guess_witness(r1)
03: if no_counters(r2) then goto(07)
04: if parities_differ(r2) then goto(99)
05: r2 <- halve(r2)
06: goto(03)
07: if marks_differ(r1, r2) then goto(09)
08: halt_reject
09: halt_accept
99: halt_reject
"""


@builtin("nonpal.guess_witness")
def guess_witness():
    """Any word of 0*31*32* as long as the input."""
    allowed = {"zeros": "03", "ones": "13", "twos": "2"}
    after = {"3": {"zeros": "ones", "ones": "twos"}}

    def step(phase, ch):
        return [
            (after[out][phase] if out == "3" else phase, out)
            for out in allowed[phase]
        ]

    return guess(step, [BITS], WITNESS, name="guess_witness", initial="zeros",
                 final=lambda phase: "" if phase == "twos" else None)


@builtin("nonpal.no_counters")
def no_counters():
    return absent("02", WITNESS, "no_counters")


@builtin("nonpal.parities_differ")
def parities_differ():
    def step(state, ch):
        zeros, twos = state
        return (zeros ^ (ch == "0"), twos ^ (ch == "2"))

    return scan(step, lambda s: s[0] != s[1], [WITNESS], name="parities_differ",
                initial=(False, False))


@builtin("nonpal.halve")
def halve():
    """The 1st, 3rd, 5th, ... '0' and the 1st, 3rd, 5th, ... '2' become '1'."""
    def step(state, ch):
        zeros, twos = state
        if ch == "0":
            return (not zeros, twos), "0" if zeros else "1"
        if ch == "2":
            return (zeros, not twos), "2" if twos else "1"
        return state, ch

    return rewrite(step, [WITNESS], WITNESS, name="halve", initial=(False, False))


@builtin("nonpal.marks_differ")
def marks_differ():
    """The input bits under the two '3's differ."""
    def step(state, sym):
        bit, mark = sym
        if mark != "3":
            return state
        if not state:
            return ("first", bit)
        return ("second", state[1] != bit)

    return scan(step, lambda s: s[:1] == ("second",) and s[1],
                [BITS, WITNESS], name="marks_differ", initial=())


def prog_nonpalindrome() -> Program:
    return parse_program(NONPALINDROME_SOURCE, name="nonpalindrome")


# ---------- 3SAT ----------

FORMULA = "01+-|&"
SIGNS = "+-"
ASSIGNMENT = ".?TF"

SAT_SOURCE = """\
; 3SAT in the nice binary format: round i assigns one guessed value to variable i
machine NARM
input "01+-|&"
use malformed = builtin(sat.malformed)
use zero_names = builtin(sat.zero_names)
use unassigned = builtin(sat.unassigned)
use increment_names = builtin(sat.increment_names)
use guess_assign = builtin(sat.guess_assign)
use all_assigned = builtin(sat.all_assigned)
use satisfied = builtin(sat.satisfied)
01: read(r1)
02: if malformed(r1) then goto(99)
03: r2 <- zero_names(r1)
04: r3 <- unassigned(r1)
05: r2 <- increment_names(r2)
06: r3 <- guess_assign(r1, r2, r3)
07: if all_assigned(r3) then goto(09)
08: goto(05)
09: if satisfied(r1, r3) then goto(11)
10: halt_reject
11: halt_accept
99: halt_reject
"""

# an accepting path runs SAT_ROUND_STEPS * rounds + SAT_FIXED_STEPS instructions
SAT_FIXED_STEPS = 5
SAT_ROUND_STEPS = 4


@builtin("sat.malformed")
def sat_malformed():
    """Not clauses of three literals `name sign` joined by '|', clauses by '&'.

    A name of only zeros would never be matched by the counters.
    """
    def step(state, ch):
        if state == "bad":
            return state
        lit, phase, one = state
        if ch in BITS and phase in ("begin", "name"):
            return (lit, "name", one or ch == "1")
        if ch in SIGNS and phase == "name" and one:
            return (lit, "signed", False)
        if ch == "|" and phase == "signed" and lit < 2:
            return (lit + 1, "begin", False)
        if ch == "&" and phase == "signed" and lit == 2:
            return (0, "begin", False)
        return "bad"

    return scan(step, lambda s: s != (2, "signed", False), [FORMULA], name="malformed",
                initial=(0, "begin", False))


@builtin("sat.zero_names")
def zero_names():
    return rewrite(lambda s, ch: (s, "0" if ch in BITS else ch), [FORMULA], FORMULA,
                   name="zero_names", initial=0)


@builtin("sat.unassigned")
def unassigned():
    """'?' under every sign."""
    return rewrite(lambda s, ch: (s, "?" if ch in SIGNS else "."), [FORMULA], ASSIGNMENT,
                   name="unassigned", initial=0)


@builtin("sat.increment_names")
def increment_names():
    """Binary increment of every name; all ones wraps to zero."""
    def step(carry, ch):
        if ch not in BITS:
            return True, ch
        if carry:
            return ch == "1", "0" if ch == "1" else "1"
        return False, ch

    return rewrite(step, [FORMULA], FORMULA, name="increment_names", direction=RTL, initial=True)


@builtin("sat.guess_assign")
def guess_assign():
    """Guess T or F and write it under every unassigned literal whose name equals its counter."""
    def step(state, sym):
        ch, counter, mark = sym
        if state is None:
            return [x for v in "TF" for x in step((v, True), sym)]
        value, equal = state
        if ch in BITS:
            return [((value, equal and ch == counter), ".")]
        if ch in SIGNS:
            return [((value, True), value if equal and mark == "?" else mark)]
        return [((value, True), ".")]

    return guess(step, [FORMULA, FORMULA, ASSIGNMENT], ASSIGNMENT, name="guess_assign",
                 final=lambda state: "")


@builtin("sat.all_assigned")
def all_assigned():
    return absent("?", ASSIGNMENT, "all_assigned")


@builtin("sat.satisfied")
def satisfied():
    def step(sat, sym):
        ch, mark = sym
        if ch in SIGNS:
            return sat or (ch, mark) in (("+", "T"), ("-", "F"))
        if ch == "&":
            return False if sat else None
        return sat

    return scan(step, bool, [FORMULA, ASSIGNMENT], name="satisfied", initial=False)


def prog_3sat() -> Program:
    return parse_program(SAT_SOURCE, name="3sat")


def sat_rounds(weak_steps: int) -> int:
    """Assignment rounds on an accepting path of the given length."""
    return (weak_steps - SAT_FIXED_STEPS) // SAT_ROUND_STEPS


# ---------- Greibach normal form ----------

STACK_END = "$"


def symbol_table(g: GreibachGrammar) -> Dict[str, str]:
    """One machine character per nonterminal, disjoint from the terminals."""
    taken = set(g.terminals) | {STACK_END}
    table: Dict[str, str] = {}
    spare = (ch for ch in ascii_uppercase + "".join(chr(c) for c in range(0x391, 0x3C9)) if ch not in taken)
    for name in g.nonterminals:
        if len(name) == 1 and name not in taken and name not in table.values():
            table[name] = name
    for name in g.nonterminals:
        if name not in table:
            ch = next(spare)
            while ch in table.values():
                ch = next(spare)
            table[name] = ch
    return table


def _start_form(start: str, terminals: str):
    """x -> S$x."""
    def step(pending, ch):
        if pending == "init":
            return ch, start + STACK_END
        return ch, pending

    return rewrite(step, [terminals], terminals + start + STACK_END, name="start_form",
                   initial="init", final=lambda pending: start + STACK_END if pending == "init" else pending,
                   bound=2)


def _derive(rules: List[Tuple[str, str, str]], stack: str, terminals: str, bound: int):
    """One leftmost derivation step on `stack$input`.

    A rule A -> a alpha applies when the stack starts with A and the input
    with a; the stack head becomes alpha and a is consumed. Output runs
    behind the input through a short queue.
    """
    by_head: Dict[str, List[Tuple[str, str]]] = {}
    for head, terminal, tail in rules:
        by_head.setdefault(head, []).append((terminal, tail))

    def step(state, ch):
        phase = state[0]
        if phase == "start":
            return [(("stack", a, tail[2:]), tail[:2]) for a, tail in by_head.get(ch, ())]
        if phase == "stack":
            _, a, queue = state
            queue += ch
            nxt = ("term", a, queue[2:]) if ch == STACK_END else ("stack", a, queue[2:])
            return [(nxt, queue[:2])]
        if phase == "term":
            _, a, queue = state
            if ch != a:
                return []
            return [(("input", queue[2:]), queue[:2])]
        queue = state[1] + ch
        return [(("input", queue[2:]), queue[:2])]

    def final(state):
        return state[1] if state[0] == "input" else None

    chars = stack + STACK_END + terminals
    return guess(step, [chars], chars, name="derive", initial=("start",), final=final, bound=bound)


def _finished(chars: str):
    def step(seen, ch):
        return None if seen or ch != STACK_END else True

    return scan(step, bool, [chars], name="finished", initial=False)


GREIBACH_BODY = """\
01: read(r1)
02: r2 <- start_form(r1)
03: if finished(r2) then goto(06)
04: r2 <- derive(r2)
05: goto(03)
06: halt_accept
"""


def gen_greibach_program(g: GreibachGrammar) -> Program:
    longest = max((len(tail) for _, _, tail in g.rules), default=0)
    if longest > config.GREIBACH_SHIFT:
        raise GenerationError(
            f"a rule right-hand side has {longest} nonterminals; the shift bound is {config.GREIBACH_SHIFT}"
        )
    table = symbol_table(g)
    terminals = "".join(sorted(g.terminals))
    stack = "".join(table[name] for name in g.nonterminals)
    rules = [(table[h], a, "".join(table[x] for x in tail)) for h, a, tail in g.rules]
    registry = {
        "start_form": _start_form(table[g.start], terminals),
        "finished": _finished(stack + STACK_END + terminals),
        "derive": _derive(rules, stack, terminals, bound=max(2, longest)),
    }
    header = ["; leftmost derivations of a Greibach normal form grammar", "machine NARM",
              f"input {json.dumps(terminals)}"]
    program = parse_program("\n".join(header) + "\n" + GREIBACH_BODY, registry=registry, name="greibach")
    logger.info("generated Greibach program: %d nonterminals, %d rules", len(table), len(g.rules))
    return program

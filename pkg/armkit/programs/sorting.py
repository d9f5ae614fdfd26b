"""Odd/even transposition sort of m-bit numbers.

The input is `d..d|d..d|...|d..d`, every number exactly m digits. A round
pairs neighbours, (1,2),(3,4),... in odd rounds and (2,3),(4,5),... in
even ones, compares every pair bit by bit from the most significant end
and then swaps the pairs that are out of order, again one bit position per
step. n rounds sort n numbers.

    r1  the numbers
    r2  role of each cell: L/R for the left/right number of a pair, '-' unpaired
    r3  '^' on the current bit of every number
    r4  comparison status '=', '<' or '>' on the last cell of each R number
    r5  '>' over both numbers of every pair that must swap
    r6  scratch copy used while swapping
    r7  round marker 'q' on the first bit of number j in round j
"""
import logging

from armkit.errors import GenerationError
from armkit.machine.parser import parse_program
from armkit.machine.program import Program
from armkit.programs.builtins import builtin
from armkit.programs.passes import RTL, absent, rewrite, scan

logger = logging.getLogger(__name__)

DIGITS = "01"
SEP = "|"
NUMBERS = DIGITS + SEP
ROLES = ".LR-"
CURSOR = ".^"
STATUS = ".=<>"
SWAP = ".>"
ROUND = ".q"

SOURCE = """\
; odd/even transposition sort
machine DARM
input "01|"
use roles_odd = builtin(sort.roles_odd)
use swap_roles = builtin(sort.swap_roles)
use round_marker = builtin(sort.round_marker)
use next_round = builtin(sort.next_round)
use rounds_done = builtin(sort.rounds_done)
use cursor_start = builtin(sort.cursor_start)
use cursor_next = builtin(sort.cursor_next)
use at_last_bit = builtin(sort.at_last_bit)
use status_reset = builtin(sort.status_reset)
use compare_bit = builtin(sort.compare_bit)
use decide = builtin(sort.decide)
use swap_right = builtin(sort.swap_right)
use swap_left = builtin(sort.swap_left)
01: read(r1)
02: if ragged(r1) then goto(99)
03: r2 <- roles_odd(r1)
04: r7 <- round_marker(r1)
05: if rounds_done(r7) then goto(30)
06: r3 <- cursor_start(r1)
07: r4 <- status_reset(r1, r2)
08: r4 <- compare_bit(r1, r2, r3, r4)
09: if at_last_bit(r1, r3) then goto(12)
10: r3 <- cursor_next(r1, r3)
11: goto(08)
12: r5 <- decide(r2, r4)
13: r3 <- cursor_start(r1)
14: r6 <- swap_right(r1, r2, r3, r5)
15: r1 <- swap_left(r1, r2, r3, r5, r6)
16: if at_last_bit(r1, r3) then goto(19)
17: r3 <- cursor_next(r1, r3)
18: goto(14)
19: r2 <- swap_roles(r1, r2)
20: r7 <- next_round(r1, r7)
21: goto(05)
30: write(r1)
31: halt
99: halt_reject
"""


def ragged(m: int):
    """Input is not a '|'-separated list of m-digit numbers."""
    def step(state, ch):
        if state == "bad":
            return state
        count, _ = state
        if ch == SEP:
            return (0, True) if count == m else "bad"
        return (count + 1, True) if count < m else "bad"

    return scan(step, lambda s: s == "bad" or (s[1] and s[0] != m), [NUMBERS],
                name=f"ragged_{m}", initial=(0, False))


@builtin("sort.roles_odd")
def roles_odd():
    def step(role, ch):
        if ch == SEP:
            return ("R" if role == "L" else "L"), "."
        return role, role

    return rewrite(step, [NUMBERS], ROLES, name="roles_odd", initial="L")


@builtin("sort.swap_roles")
def swap_roles():
    """Odd pairing becomes even pairing and back."""
    following = {"-": "L", "L": "R", "R": "L"}

    def step(state, sym):
        ch, old = sym
        if state is None:
            state = ("in", "-" if old == "L" else "L")
        phase, role = state
        if ch == SEP:
            return ("gap", role), "."
        if phase == "gap":
            role = following[role]
        return ("in", role), role

    return rewrite(step, [NUMBERS, ROLES], ROLES, name="swap_roles")


@builtin("sort.round_marker")
def round_marker():
    def step(placed, ch):
        return True, "q" if not placed and ch != SEP else "."

    return rewrite(step, [NUMBERS], ROUND, name="round_marker", initial=False)


@builtin("sort.next_round")
def next_round():
    def step(phase, sym):
        ch, q = sym
        if phase == "before":
            return ("moving" if q == "q" else "before"), "."
        if phase == "moving":
            return ("place" if ch == SEP else "moving"), "."
        if phase == "place":
            return "done", "q"
        return "done", "."

    return rewrite(step, [NUMBERS, ROUND], ROUND, name="next_round", initial="before")


@builtin("sort.rounds_done")
def rounds_done():
    return absent("q", ROUND, "rounds_done")


@builtin("sort.cursor_start")
def cursor_start():
    def step(at_start, ch):
        if ch == SEP:
            return True, "."
        return False, "^" if at_start else "."

    return rewrite(step, [NUMBERS], CURSOR, name="cursor_start", initial=True)


@builtin("sort.cursor_next")
def cursor_next():
    """Every cursor one bit right; a cursor on a last bit falls off."""
    def step(prev, sym):
        ch, k = sym
        return k == "^", "^" if prev and ch != SEP else "."

    return rewrite(step, [NUMBERS, CURSOR], CURSOR, name="cursor_next", initial=False)


@builtin("sort.at_last_bit")
def at_last_bit():
    def step(state, sym):
        ch, k = sym
        prev, found = state
        if ch == SEP and prev:
            found = True
        return k == "^", found

    return scan(step, lambda s: s[1] or s[0], [NUMBERS, CURSOR], name="at_last_bit",
                initial=(False, False))


@builtin("sort.status_reset")
def status_reset():
    """'=' on the last cell of every R number."""
    def step(boundary, sym):
        ch, role = sym
        if ch == SEP:
            return True, "."
        return False, "=" if boundary and role == "R" else "."

    return rewrite(step, [NUMBERS, ROLES], STATUS, name="status_reset", direction=RTL,
                   initial=True)


def _order(a: str, b: str) -> str:
    if a == b:
        return "="
    return "<" if a < b else ">"


@builtin("sort.compare_bit")
def compare_bit():
    """Carry the L cursor bit to the R cursor; settle '=' statuses."""
    def step(state, sym):
        ch, role, k, status = sym
        carried, result = state
        if k == "^" and role == "L":
            carried = ch
        elif k == "^" and role == "R" and carried is not None:
            result = _order(carried, ch)
        if status in "=<>":
            out = result if status == "=" and result is not None else status
            return (carried, None), out
        return (carried, result), status

    return rewrite(step, [NUMBERS, ROLES, CURSOR, STATUS], STATUS, name="compare_bit",
                   initial=(None, None))


@builtin("sort.decide")
def decide():
    def step(swap, sym):
        role, status = sym
        if role == "R" and status in "=<>":
            swap = status == ">"
        if role in "LR":
            return swap, ">" if swap else "."
        return swap, "."

    return rewrite(step, [ROLES, STATUS], SWAP, name="decide", direction=RTL, initial=False)


@builtin("sort.swap_right")
def swap_right():
    """Swapping pairs: the R cursor bit takes the L cursor bit."""
    def step(carried, sym):
        ch, role, k, d = sym
        if k == "^" and role == "L":
            return ch, ch
        if k == "^" and role == "R" and d == ">" and carried is not None:
            return carried, carried
        return carried, ch

    return rewrite(step, [NUMBERS, ROLES, CURSOR, SWAP], NUMBERS, name="swap_right")


@builtin("sort.swap_left")
def swap_left():
    """Swapping pairs: the L cursor bit takes the old R cursor bit."""
    def step(carried, sym):
        ch, role, k, d, half = sym
        if k == "^" and role == "R":
            return ch, half
        if k == "^" and role == "L" and d == ">" and carried is not None:
            return carried, carried
        return carried, half

    return rewrite(step, [NUMBERS, ROLES, CURSOR, SWAP, NUMBERS], NUMBERS, name="swap_left",
                   direction=RTL)


def prog_sort(m: int) -> Program:
    if m < 1:
        raise GenerationError("numbers need at least one digit")
    program = parse_program(SOURCE, registry={"ragged": ragged(m)}, name=f"sort_{m}")
    logger.info("generated sort program for %d-digit numbers", m)
    return program

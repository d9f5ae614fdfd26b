"""Quantified Boolean formulas on a machine with exponential padding.

The input is `Q name ... [clauses]` with every literal `+name_` or
`-name_`. The pad y is cut into instances by '3's; every instance gets a
copy of the clause list followed by '.' and a result slot:

    3 +00_,+01_;-01_ . 5 5 ... 3 +00_,... . 5 ... 3 4 4 4 ...

'5' is free space, '4' fills the unused end of the register. Round l of
the assignment loop writes s/u for variable l, flipping its value every
2^l instances; '2' separates instances inside one block of equally valued
ones. After evaluating every instance, the folding loop runs back over the
quantifier prefix and merges neighbouring block results until one is left.

    r1  the formula x          r3  z, the variable counters
    r2  y, the instances       r4  marker over x
"""
import logging

from armkit.automata.convolution import PAD
from armkit.errors import GenerationError
from armkit.machine.parser import parse_program
from armkit.machine.program import Program
from armkit.programs.builtins import builtin
from armkit.programs.passes import RTL, absent, present, rewrite, scan, settled

logger = logging.getLogger(__name__)

BITS = "01"
SIGNS = "+-"
QUANTIFIERS = "EA"
TAIL = "|"
FORMULA = "EA01 []+-_,;" + TAIL
INNER = "+-01_,;"
CELLS = "012345+-_,;.su"
MARK = ".^"
UNARY = "01"

_FLIP = {"s": "u", "u": "s"}

BODY = """\
20: if malformed(r1) then goto(99)
21: r2 <- threes(r2)
22: if spaced(r1, r2) then goto(25)
23: r2 <- thin(r2)
24: goto(22)
25: r2 <- end_mark(r2)
26: r4 <- mark_inner(r1)
27: if marker_closed(r1, r4) then goto(31)
28: r2 <- copy_marked(r1, r4, r2)
29: r4 <- marker_next(r4)
30: goto(27)
31: r2 <- place_dot(r2)
32: r3 <- zero_names(r2)
33: if stuck(r2, r3) then goto(99)
34: if all_valued(r2) then goto(39)
35: r2 <- assign(r2, r3)
36: r2 <- pair_blocks(r2)
37: r3 <- increment_names(r3)
38: goto(33)
39: if lacks_block(r2) then goto(99)
40: r2 <- keep_first_block(r2)
41: r2 <- reopen(r2)
42: r2 <- evaluate(r2)
43: r4 <- mark_last_quantifier(r1)
44: if no_marker(r4) then goto(48)
45: r2 <- fold(r1, r4, r2)
46: r4 <- marker_back(r1, r4)
47: goto(44)
48: if satisfied(r2) then goto(50)
49: halt_reject
50: halt_accept
99: halt_reject
"""

OPS = [
    "malformed", "threes", "spaced", "thin", "end_mark", "mark_inner", "marker_closed",
    "copy_marked", "marker_next", "place_dot", "zero_names", "stuck", "all_valued",
    "assign", "pair_blocks", "increment_names", "lacks_block", "keep_first_block",
    "reopen", "evaluate", "mark_last_quantifier", "no_marker", "fold", "marker_back",
    "satisfied",
]

_USES = "\n".join(f"use {op} = builtin(qsat.{op})" for op in OPS)

QSAT_SOURCE = f"""\
; QSAT with an exponentially long pad
machine ExpARM
input "EA01 []+-_,;"
{_USES}
01: read_and_boost(r1, r2, exp, p:2:1, q:2:1, over:EA)
{BODY}"""

# lines the trace inspectors look at
ASSIGNED_LINE = 39
EVALUATED_LINE = 43


# ---------- syntax and layout ----------

_SYNTAX = {
    ("start", "Q"): "name0",
    ("name0", "b"): "name",
    ("name", "b"): "name",
    ("name", " "): "prefix",
    ("prefix", "Q"): "name0",
    ("prefix", "["): "sign",
    ("sign", "s"): "lit0",
    ("lit0", "b"): "lit",
    ("lit", "b"): "lit",
    ("lit", "_"): "value",
    ("value", ","): "sign",
    ("value", ";"): "sign",
    ("value", "]"): "closed",
    ("closed", TAIL): "tail",
}


def _kind(ch: str) -> str:
    if ch in QUANTIFIERS:
        return "Q"
    if ch in BITS:
        return "b"
    if ch in SIGNS:
        return "s"
    return ch


@builtin("qsat.malformed")
def malformed():
    """Not `Q name ... [literals]`, optionally followed by `|0...0`."""
    def step(state, ch):
        if state == "tail":
            return state if ch == "0" else "bad"
        if state == "bad":
            return state
        return _SYNTAX.get((state, _kind(ch)), "bad")

    return scan(step, lambda s: s not in ("closed", "tail"), [FORMULA], name="malformed",
                initial="start")


@builtin("qsat.threes")
def threes():
    return rewrite(lambda s, ch: (s, "3"), ["0"], "3", name="threes", initial=0)


@builtin("qsat.spaced")
def spaced():
    """The second '3' of y lies at least two cells past the formula part of x."""
    def step(state, sym):
        if state in ("yes", "no"):
            return state
        ch, cell = sym
        started, passed = state
        if started and cell == "3":
            return "yes" if passed else "no"
        return True, passed or ch in (PAD, TAIL)

    return scan(step, lambda s: s != "no", [FORMULA, "35"], name="spaced",
                initial=(False, False), ragged=True)


@builtin("qsat.thin")
def thin():
    """The 2nd, 4th, 6th, ... '3' becomes '5'."""
    def step(odd, ch):
        if ch != "3":
            return odd, ch
        return (not odd), "5" if odd else "3"

    return rewrite(step, ["35"], "35", name="thin", initial=False)


@builtin("qsat.end_mark")
def end_mark():
    """Everything after the last '3' becomes '4'; a '4' is added if nothing follows it."""
    def step(state, ch):
        if state == "body":
            return state, ch
        if ch == "3":
            return "body", "34" if state == "empty" else "3"
        return "tail", "4"

    return rewrite(step, ["35"], "345", name="end_mark", direction=RTL, initial="empty", bound=1)


# ---------- copying the clause list ----------

@builtin("qsat.mark_inner")
def mark_inner():
    def step(state, ch):
        if state == "next":
            return "done", "^"
        return ("next" if state == "before" and ch == "[" else state), "."

    return rewrite(step, [FORMULA], MARK, name="mark_inner", initial="before")


@builtin("qsat.marker_closed")
def marker_closed():
    def step(closed, sym):
        ch, mark = sym
        return closed or (mark == "^" and ch == "]")

    return scan(step, bool, [FORMULA, MARK], name="marker_closed", initial=False)


@builtin("qsat.copy_marked")
def copy_marked():
    """The marked formula character goes into the first '5' after every '3'."""
    def step(state, sym):
        if state is None:
            return [x for a in INNER for x in step((a, False, False), sym)]
        a, seeking, verified = state
        ch, mark, cell = sym
        if mark == "^":
            if ch != a:
                return []
            verified = True
        if cell == PAD:
            return []
        if cell == "3":
            return [((a, True, verified), cell)]
        if cell == "5" and seeking:
            return [((a, False, verified), a)]
        return [((a, seeking, verified), cell)]

    return settled(step, [FORMULA, MARK, CELLS], CELLS, name="copy_marked",
                   final=lambda state: "" if state and state[2] else None, ragged=True)


@builtin("qsat.marker_next")
def marker_next():
    return rewrite(lambda prev, ch: (ch == "^", "^" if prev else "."), [MARK], MARK,
                   name="marker_next", initial=False)


@builtin("qsat.place_dot")
def place_dot():
    def step(seeking, ch):
        if ch == "3":
            return True, ch
        if ch == "5" and seeking:
            return False, "."
        return seeking, ch

    return rewrite(step, [CELLS], CELLS, name="place_dot", initial=False)


# ---------- assignment loop ----------

@builtin("qsat.zero_names")
def zero_names():
    return rewrite(lambda s, ch: (s, "0" if ch == "1" else ch), [CELLS], CELLS,
                   name="zero_names", initial=0)


@builtin("qsat.stuck")
def stuck():
    """Some literal is unvalued but no unvalued name equals its counter."""
    def step(state, sym):
        cell, counter = sym
        equal, unvalued, matched = state
        if cell in SIGNS:
            return True, unvalued, matched
        if cell in BITS and equal is not None:
            return equal and cell == counter, unvalued, matched
        if cell == "_" and equal is not None:
            return None, True, matched or equal
        return None, unvalued, matched

    return scan(step, lambda s: s[1] and not s[2], [CELLS, CELLS], name="stuck",
                initial=(None, False, False))


@builtin("qsat.all_valued")
def all_valued():
    return absent("_", CELLS, "all_valued")


@builtin("qsat.assign")
def assign():
    """Value b under every name equal to its counter; b flips at every '3', the first instance gets u."""
    def step(state, sym):
        cell, counter = sym
        b, equal = state
        if cell == "3":
            return (_FLIP[b], None), cell
        if cell in SIGNS:
            return (b, True), cell
        if cell in BITS and equal is not None:
            return (b, equal and cell == counter), cell
        if cell == "_" and equal:
            return (b, None), b
        return (b, None), cell

    return rewrite(step, [CELLS, CELLS], CELLS, name="assign", initial=("s", None))


@builtin("qsat.pair_blocks")
def pair_blocks():
    """The 2nd, 4th, 6th, ... '3' becomes '2'."""
    def step(odd, ch):
        if ch != "3":
            return odd, ch
        return (not odd), "2" if odd else "3"

    return rewrite(step, [CELLS], CELLS, name="pair_blocks", initial=False)


@builtin("qsat.increment_names")
def increment_names():
    def step(carry, ch):
        if ch not in BITS:
            return True, ch
        if carry:
            return ch == "1", "0" if ch == "1" else "1"
        return False, ch

    return rewrite(step, [CELLS], CELLS, name="increment_names", direction=RTL, initial=True)


@builtin("qsat.lacks_block")
def lacks_block():
    """The pad was too short to hold one full block of instances."""
    def step(threes_seen, ch):
        return min(2, threes_seen + (ch == "3"))

    return scan(step, lambda n: n < 2, [CELLS], name="lacks_block", initial=0)


@builtin("qsat.keep_first_block")
def keep_first_block():
    def step(threes_seen, ch):
        if threes_seen >= 2:
            return threes_seen, "4"
        return threes_seen + (ch == "3"), ch

    return rewrite(step, [CELLS], CELLS, name="keep_first_block", initial=0)


@builtin("qsat.reopen")
def reopen():
    return rewrite(lambda s, ch: (s, "3" if ch == "2" else ch), [CELLS], CELLS,
                   name="reopen", initial=0)


# ---------- evaluation and folding ----------

@builtin("qsat.evaluate")
def evaluate():
    """The result slot of every instance gets s when each clause has a true literal."""
    def step(state, ch):
        phase, sign, clause, every = state
        if ch == "3":
            return ("in", None, False, True), ch
        if phase == "in":
            if ch in SIGNS:
                return (phase, ch, clause, every), ch
            if ch in "su":
                return (phase, sign, clause or (sign, ch) in (("+", "s"), ("-", "u")), every), ch
            if ch == ";":
                return (phase, None, False, every and clause), ch
            if ch == ".":
                return ("slot", None, False, every and clause), ch
            return state, ch
        if phase == "slot" and ch == "5":
            return ("out", None, False, True), "s" if every else "u"
        return state, ch

    return rewrite(step, [CELLS], CELLS, name="evaluate", initial=("out", None, False, True))


@builtin("qsat.mark_last_quantifier")
def mark_last_quantifier():
    def step(found, ch):
        if not found and ch in QUANTIFIERS:
            return True, "^"
        return found, "."

    return rewrite(step, [FORMULA], MARK, name="mark_last_quantifier", direction=RTL, initial=False)


@builtin("qsat.no_marker")
def no_marker():
    return absent("^", MARK, "no_marker")


def _merge(quantifier: str, first: str, second: str) -> str:
    if quantifier == "A":
        return "s" if first == second == "s" else "u"
    return "s" if "s" in (first, second) else "u"


@builtin("qsat.fold")
def fold():
    """Merge the 1st and 2nd, 3rd and 4th, ... live results under the marked quantifier.

    The first of a pair becomes '5', the second holds the merged value.
    """
    def step(state, sym):
        if state is None:
            return [x for q in QUANTIFIERS for x in step((q, False, False, None), sym)]
        q, verified, after_dot, pending = state
        ch, mark, cell = sym
        if mark == "^":
            if ch != q:
                return []
            verified = True
        if cell == PAD:
            return []
        out = cell
        if after_dot and cell in "su":
            if pending is None:
                pending, out = cell, "5"
            else:
                pending, out = None, _merge(q, pending, cell)
        return [((q, verified, cell == ".", pending), out)]

    def final(state):
        return "" if state and state[1] and state[3] is None else None

    return settled(step, [FORMULA, MARK, CELLS], CELLS, name="fold", final=final, ragged=True)


@builtin("qsat.marker_back")
def marker_back():
    """The marker moves to the previous quantifier or disappears."""
    def step(carrying, sym):
        ch, mark = sym
        if mark == "^":
            return True, "."
        if carrying and ch in QUANTIFIERS:
            return False, "^"
        return carrying, "."

    return rewrite(step, [FORMULA, MARK], MARK, name="marker_back", direction=RTL, initial=False)


@builtin("qsat.satisfied")
def satisfied():
    def step(state, ch):
        after_dot, found = state
        return ch == ".", found or (after_dot and ch == "s")

    return scan(step, lambda s: s[1], [CELLS], name="satisfied", initial=(False, False))


def prog_qsat() -> Program:
    return parse_program(QSAT_SOURCE, name="qsat")


# ---------- few-variable 3SAT on polynomial padding ----------

LOGVARS_GUARD = """\
02: if has_universal(r1) then goto(99)
03: r5 <- unary(r1)
04: if is_one(r5) then goto(08)
05: r5 <- floor_halve(r5)
06: r6 <- grow(r6)
07: goto(04)
08: r7 <- r1
09: if no_quantifier(r7) then goto(20)
10: if empty(r6) then goto(99)
11: r7 <- drop_quantifier(r7)
12: r6 <- shorten(r6)
13: goto(09)
"""


@builtin("qsat.has_universal")
def has_universal():
    return present("A", FORMULA, "has_universal")


@builtin("qsat.unary")
def unary():
    return rewrite(lambda s, ch: (s, "0"), [FORMULA], UNARY, name="unary", initial=0)


@builtin("qsat.floor_halve")
def floor_halve():
    """The 1st, 3rd, 5th, ... '0' becomes '1': z zeros leave floor(z/2)."""
    def step(odd, ch):
        if ch != "0":
            return odd, ch
        return (not odd), "0" if odd else "1"

    return rewrite(step, [UNARY], UNARY, name="floor_halve", initial=False)


@builtin("qsat.no_quantifier")
def no_quantifier():
    return absent(QUANTIFIERS, FORMULA + ".", "no_quantifier")


@builtin("qsat.drop_quantifier")
def drop_quantifier():
    def step(done, ch):
        if not done and ch in QUANTIFIERS:
            return True, "."
        return done, ch

    return rewrite(step, [FORMULA + "."], FORMULA + ".", name="drop_quantifier", initial=False)


@builtin("qsat.empty")
def empty():
    return scan(lambda s, ch: None, lambda s: True, ["1"], name="empty")


@builtin("qsat.shorten")
def shorten():
    def step(first, ch):
        return False, "" if first else ch

    return rewrite(step, ["1"], "1", name="shorten", initial=True, bound=1)


def _grow(c: int):
    """c more '1's."""
    return rewrite(lambda s, ch: (s, ch), ["1"], "1", name=f"grow_{c}", initial=0,
                   final=lambda s: "1" * c, bound=c)


def logvars_pad(c: int) -> str:
    """Coefficients of 4 n^(c+1) for read_and_boost."""
    return ":".join(["0"] * (c + 1) + ["4"])


def prog_3sat_logvars(c: int) -> Program:
    """3SAT with at most c log n variables, on a pad polynomial in the input length n.

    The input is `E name ... [clauses]|0...0`: an all-existential formula
    followed by filler that only sets n. More than c * floor(log2 n)
    variables, or any universal quantifier, rejects.
    """
    if c < 1:
        raise GenerationError("c must be at least 1")
    extra = ["has_universal", "unary", "floor_halve", "no_quantifier", "drop_quantifier",
             "empty", "shorten"]
    uses = "\n".join(f"use {op} = builtin(qsat.{op})" for op in OPS + extra)
    text = f"""\
; 3SAT with at most {c} log n variables, polynomial pad
machine PARM
input "EA01 []+-_,;|"
{uses}
use is_one = builtin(ltwo.is_one)
01: read_and_boost(r1, r2, poly, p:{logvars_pad(c)})
{LOGVARS_GUARD}{BODY}"""
    program = parse_program(text, registry={"grow": _grow(c)}, name=f"3sat_logvars_{c}")
    logger.info("generated few-variable 3SAT program for c=%d", c)
    return program

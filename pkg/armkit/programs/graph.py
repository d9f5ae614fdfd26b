"""Reachability on the tape form of a graph.

Register r1 holds the tape. Work registers run alongside it, one mark per
tape position:

    r2  '*' on the first bit of every nonzero entry
    r3  's' over the bits of the selected entry e_uv
    r4  per-field cursor: y/n matching so far, Y/N after the last bit
    r5  BFS counter cnt, copied under every vertex field
    r6  cnt + 1

connectivity ticks the head of the first edge leaving a ticked vertex and
then deletes all edges into that head. The head's name is compared with
every field in parallel one bit per round, so an iteration costs O(log n)
steps and there are at most n of them. bfs_distance does the same layer
by layer and writes cnt+1 under the newly reached names. sdag walks the
columns with one marker per row; a column needs a constant number of
steps.
"""
import json
import logging
import re
from typing import Dict, List, Tuple

from armkit.errors import GenerationError
from armkit.machine.parser import parse_program
from armkit.machine.program import Program
from armkit.programs.builtins import builtin
from armkit.programs.encoders import SEP, TAPE_ALPHABET, TAPE_INPUT, cell_of, with_bit
from armkit.programs.passes import LTR, RTL, absent, present, rewrite, scan

logger = logging.getLogger(__name__)

TAPE = TAPE_ALPHABET
NONZERO = ".*"
SELECTED = ".s"
CURSOR = ".ynYN"
COUNTER = ".01"
ROW_MARK = ".v"
COLUMN_MARK = ".e"

# side of the field we are in after a separator, per scan direction
_NEXT_LTR = {"pre": "V", "V": "E", "E": "V"}
_NEXT_RTL = {"post": "E", "E": "V", "V": "E"}


# ---------- shared ----------

@builtin("graph.malformed")
def malformed():
    """Tape does not have the shape |V|E|V|E|...| with marked field starts."""
    def step(state, ch):
        where, tick, rows = state
        c = cell_of(ch)
        if where == "bad":
            return state
        if where == "pre":
            return ("Vs", None, rows) if ch == SEP else ("bad", None, rows)
        if c is not None and c.dist is not None:
            return ("bad", None, rows)
        if where == "Vs":
            return ("Vi", c.tick, rows) if c is not None and c.first else ("bad", None, rows)
        if where == "Vi":
            if ch == SEP:
                return ("Es", None, rows)
            return state if not c.first and c.tick == tick else ("bad", None, rows)
        if where == "Es":
            return ("Ei", None, rows) if c is not None and c.first and not c.tick else ("bad", None, rows)
        if ch == SEP:
            return ("Vs", None, True)
        return state if not c.tick else ("bad", None, rows)

    return scan(step, lambda s: s != ("Vs", None, True), [TAPE], name="malformed",
                initial=("pre", None, False))


@builtin("graph.nonzero_marks")
def nonzero_marks():
    def step(state, ch):
        side, any_one = state
        if ch == SEP:
            return (_NEXT_RTL[side], False), "."
        c = cell_of(ch)
        if side != "E":
            return state, "."
        any_one = any_one or c.bit == 1
        if c.first:
            return (side, False), "*" if any_one else "."
        return (side, any_one), "."

    return rewrite(step, [TAPE], NONZERO, name="nonzero_marks", direction=RTL,
                   initial=("post", False))


def _select(layered: bool):
    """First nonzero entry in the first eligible row.

    Eligible rows have a ticked name, or with `layered` a name whose
    distance equals the counter.
    """
    def step(state, sym):
        side, eligible, mode = state
        t, nz = sym[0], sym[1]
        if t == SEP:
            side = _NEXT_LTR[side]
            if mode == "sel":
                mode = "done"
            if side == "V":
                eligible = True if layered else False
            return (side, eligible, mode), "."
        c = cell_of(t)
        if side == "V":
            if layered:
                eligible = eligible and c.dist is not None and str(c.dist) == sym[2]
            else:
                eligible = c.tick
            return (side, eligible, mode), "."
        if mode == "search" and eligible and nz == "*":
            return (side, eligible, "sel"), "s"
        if mode == "sel":
            if c.first:
                return (side, eligible, "done"), "."
            return state, "s"
        return state, "."

    tracks = [TAPE, NONZERO, COUNTER] if layered else [TAPE, NONZERO]
    return rewrite(step, tracks, SELECTED, name="select_layer_edge" if layered else "select_edge",
                   initial=("pre", False, "search"))


@builtin("graph.select_edge")
def select_edge():
    return _select(False)


@builtin("graph.select_layer_edge")
def select_layer_edge():
    return _select(True)


@builtin("graph.no_selection")
def no_selection():
    return absent("s", SELECTED, "no_selection")


@builtin("graph.cursor_init")
def cursor_init():
    def step(state, ch):
        c = cell_of(ch)
        return state, "y" if c is not None and c.first else "."

    return rewrite(step, [TAPE], CURSOR, name="cursor_init", initial=0)


def _compare(direction):
    """Broadcast the selected entry's cursor bit and knock out mismatching fields.

    A pass only informs the fields it reaches after the selected entry, so
    a round runs it once in each direction.
    """
    def step(bit, sym):
        t, u, w = sym
        c = cell_of(t)
        if w in "yn" and c is None:
            return None
        if bit is None:
            if u == "s" and w in "yn":
                return c.bit, w
            return None, w
        if w == "y" and c.bit != bit:
            return bit, "n"
        return bit, w

    name = "compare_left" if direction == RTL else "compare_right"
    return rewrite(step, [TAPE, SELECTED, CURSOR], CURSOR, name=name, direction=direction)


@builtin("graph.compare_left")
def compare_left():
    return _compare(RTL)


@builtin("graph.compare_right")
def compare_right():
    return _compare(LTR)


@builtin("graph.advance")
def advance():
    """Every cursor moves one bit right; at a field's last bit it turns final."""
    def step(pending, sym):
        t, w = sym
        c = cell_of(t)
        if pending is None:
            if w in "yn":
                return w, ""
            return None, w
        if c is not None and not c.first:
            return None, "." + pending
        if w in "yn":
            return w, pending.upper()
        return None, pending.upper() + w

    return rewrite(step, [TAPE, CURSOR], CURSOR, name="advance",
                   final=lambda pending: "" if pending is None else pending.upper(), bound=1)


@builtin("graph.cursor_done")
def cursor_done():
    return present("YN", CURSOR, "cursor_done")


def _apply(distance: bool):
    """Matched names get ticked (or their distance); matched entries become zero."""
    def step(state, sym):
        side, action = state
        t, w = sym[0], sym[1]
        if t == SEP:
            return (_NEXT_RTL[side], None), SEP
        c = cell_of(t)
        if w == "Y":
            if side == "E":
                action = "zero"
            elif distance:
                action = "dist" if c.dist is None else None
            else:
                action = "tick"
        out = t
        if action == "tick":
            out = with_bit(c, tick=True)
        elif action == "zero":
            out = with_bit(c, bit=0)
        elif action == "dist":
            if sym[2] not in "01":
                return None
            out = with_bit(c, dist=int(sym[2]))
        if out is None:
            return None
        return (side, None if c.first else action), out

    tracks = [TAPE, CURSOR, COUNTER] if distance else [TAPE, CURSOR]
    return rewrite(step, tracks, TAPE, name="apply_distance" if distance else "apply_match",
                   direction=RTL, initial=("post", None))


@builtin("graph.apply_match")
def apply_match():
    return _apply(False)


# ---------- bfs_distance ----------

@builtin("graph.apply_distance")
def apply_distance():
    return _apply(True)


@builtin("graph.init_distance")
def init_distance():
    """Sources start at distance 0."""
    def step(state, ch):
        c = cell_of(ch)
        if c is not None and c.tick:
            return state, with_bit(c, tick=False, dist=0)
        return state, ch

    return rewrite(step, [TAPE], TAPE, name="init_distance", initial=0)


@builtin("graph.counter_zero")
def counter_zero():
    def step(side, ch):
        if ch == SEP:
            return _NEXT_LTR[side], "."
        return side, "0" if side == "V" else "."

    return rewrite(step, [TAPE], COUNTER, name="counter_zero", initial="pre")


@builtin("graph.counter_inc")
def counter_inc():
    """Increment every copy; all-ones wraps to zero."""
    def step(carry, ch):
        if ch == ".":
            return True, "."
        if carry:
            return ch == "1", "0" if ch == "1" else "1"
        return False, ch

    return rewrite(step, [COUNTER], COUNTER, name="counter_inc", direction=RTL, initial=True)


@builtin("graph.layer_empty")
def layer_empty():
    """No vertex has distance equal to the counter."""
    def step(state, sym):
        side, eq = state
        t, d = sym
        if t == SEP:
            if side == "V" and eq:
                return None
            side = _NEXT_LTR[side]
            return side, True
        c = cell_of(t)
        if side == "V":
            return side, eq and c.dist is not None and str(c.dist) == d
        return state

    return scan(step, lambda s: True, [TAPE, COUNTER], name="layer_empty", initial=("pre", True))


# ---------- sdag ----------

@builtin("graph.row_marker")
def row_marker():
    """Marker on the first bit of v_1."""
    def step(state, ch):
        side, done = state
        if ch == SEP:
            return (_NEXT_LTR[side], done), "."
        if side == "V" and not done:
            return (side, True), "v"
        return state, "."

    return rewrite(step, [TAPE], ROW_MARK, name="row_marker", initial=("pre", False))


@builtin("graph.column_markers")
def column_markers():
    """Marker on the first bit of e_i1 in every row."""
    def step(state, ch):
        side, at_start = state
        if ch == SEP:
            side = _NEXT_LTR[side]
            return (side, side == "E"), "."
        if at_start:
            return (side, False), "e"
        return state, "."

    return rewrite(step, [TAPE], COLUMN_MARK, name="column_markers", initial=("pre", False))


@builtin("graph.sdag_tick")
def sdag_tick():
    """Tick the marked v_j if a ticked row has a nonzero marked entry e_ij.

    In an SDAG only rows i < j can point at j, and those precede v_j.
    """
    def step(state, sym):
        side, row_ticked, checking, nonzero, found, ticking = state
        t, rv, re = sym
        if t == SEP:
            found = found or (checking and row_ticked and nonzero)
            return (_NEXT_LTR[side], row_ticked, False, False, found, False), SEP
        c = cell_of(t)
        if side == "V":
            if c.first:
                row_ticked = c.tick
                ticking = rv == "v" and found
            out = with_bit(c, tick=True) if ticking else t
            if out is None:
                return None
            return (side, row_ticked, checking, nonzero, found, ticking), out
        if c.first:
            found = found or (checking and row_ticked and nonzero)
            checking = re == "e"
            nonzero = checking and c.bit == 1
        elif checking:
            nonzero = nonzero or c.bit == 1
        return (side, row_ticked, checking, nonzero, found, ticking), t

    return rewrite(step, [TAPE, ROW_MARK, COLUMN_MARK], TAPE, name="sdag_tick",
                   initial=("pre", False, False, False, False, False))


@builtin("graph.next_row")
def next_row():
    """Row marker to the next vertex name; it falls off after v_n."""
    def step(phase, sym):
        t, rv = sym
        if phase is None:
            return ("inV", ".") if rv == "v" else (None, ".")
        if phase == "inV":
            return ("inE" if t == SEP else "inV"), "."
        if phase == "inE":
            return ("place" if t == SEP else "inE"), "."
        if phase == "place":
            return "done", "v"
        return "done", "."

    return rewrite(step, [TAPE, ROW_MARK], ROW_MARK, name="next_row")


@builtin("graph.next_column")
def next_column():
    """Each column marker to the next entry of its row."""
    def step(carry, sym):
        t, re = sym
        if re == "e":
            return True, "."
        if carry:
            if t == SEP:
                return False, "."
            if cell_of(t).first:
                return False, "e"
        return carry, "."

    return rewrite(step, [TAPE, COLUMN_MARK], COLUMN_MARK, name="next_column", initial=False)


@builtin("graph.rows_done")
def rows_done():
    return absent("v", ROW_MARK, "rows_done")


# ---------- programs ----------

_CALL = re.compile(r"([a-z_]+)\(")
_KEYWORDS = {"read", "write", "goto"}

_ROUND = [
    "r4 <- cursor_init(r1)",
    "r4 <- compare_left(r1, r3, r4)",
    "r4 <- compare_right(r1, r3, r4)",
    "r4 <- advance(r1, r4)",
]

VARIANTS: Dict[str, List[Tuple[int, str]]] = {
    "connectivity": [
        (1, "read(r1)"),
        (2, "if malformed(r1) then goto(99)"),
        (3, "r2 <- nonzero_marks(r1)"),
        (4, "r3 <- select_edge(r1, r2)"),
        (5, "if no_selection(r3) then goto(20)"),
        (6, _ROUND[0]),
        (7, _ROUND[1]),
        (8, _ROUND[2]),
        (9, _ROUND[3]),
        (10, "if cursor_done(r4) then goto(12)"),
        (11, "goto(07)"),
        (12, "r1 <- apply_match(r1, r4)"),
        (13, "goto(03)"),
        (20, "write(r1)"),
        (21, "halt"),
        (99, "halt_reject"),
    ],
    "bfs_distance": [
        (1, "read(r1)"),
        (2, "if malformed(r1) then goto(99)"),
        (3, "r1 <- init_distance(r1)"),
        (4, "r5 <- counter_zero(r1)"),
        (5, "r6 <- counter_inc(r5)"),
        (6, "if layer_empty(r1, r5) then goto(30)"),
        (7, "r2 <- nonzero_marks(r1)"),
        (8, "r3 <- select_layer_edge(r1, r2, r5)"),
        (9, "if no_selection(r3) then goto(20)"),
        (10, _ROUND[0]),
        (11, _ROUND[1]),
        (12, _ROUND[2]),
        (13, _ROUND[3]),
        (14, "if cursor_done(r4) then goto(16)"),
        (15, "goto(11)"),
        (16, "r1 <- apply_distance(r1, r4, r6)"),
        (17, "goto(07)"),
        (20, "r5 <- r6"),
        (21, "r6 <- counter_inc(r6)"),
        (22, "goto(06)"),
        (30, "write(r1)"),
        (31, "halt"),
        (99, "halt_reject"),
    ],
    "sdag": [
        (1, "read(r1)"),
        (2, "if malformed(r1) then goto(99)"),
        (3, "r2 <- row_marker(r1)"),
        (4, "r3 <- column_markers(r1)"),
        (5, "r1 <- sdag_tick(r1, r2, r3)"),
        (6, "r2 <- next_row(r1, r2)"),
        (7, "if rows_done(r2) then goto(10)"),
        (8, "r3 <- next_column(r1, r3)"),
        (9, "goto(05)"),
        (10, "write(r1)"),
        (11, "halt"),
        (99, "halt_reject"),
    ],
}


def _ops_in(lines: List[Tuple[int, str]]) -> List[str]:
    names: List[str] = []
    for _, body in lines:
        for token in _CALL.findall(body):
            if token not in _KEYWORDS and token not in names:
                names.append(token)
    return names


def graph_source(variant: str) -> str:
    lines = VARIANTS.get(variant)
    if lines is None:
        raise GenerationError(f"unknown graph variant {variant!r}; expected one of {sorted(VARIANTS)}")
    header = [
        f"; graph reachability, {variant}",
        "machine DARM",
        f"input {json.dumps(''.join(sorted(TAPE_INPUT)))}",
    ]
    header += [f"use {op} = builtin(graph.{op})" for op in _ops_in(lines)]
    body = [f"{num:02d}: {text}" for num, text in lines]
    return "\n".join(header + body) + "\n"


def gen_graph_program(variant: str = "connectivity") -> Program:
    program = parse_program(graph_source(variant), name=f"graph_{variant}")
    logger.info("generated graph program %s: %d lines", variant, len(program.lines))
    return program

"""Space-bounded nondeterministic Turing machines as UNARM programs.

The program guesses the whole computation at once as a two-row register

    C1 | C2 | ... | C(t-1)
    C2 | C3 | ... | Ct

one character per column, checks in one step that C1 is the start
configuration, that every column is a legal move and that Ct accepts,
and then spends one step per tape cell comparing the bottom row of each
block with the top row of the next, ticking compared cells off with '@'.
A configuration cell is one tape symbol plus the state if the head is on it.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from armkit.automata.convolution import PAD
from armkit.automata.relations import AutomaticRelation
from armkit.errors import GenerationError
from armkit.machine.parser import parse_program
from armkit.machine.program import Program
from armkit.programs.instances import NtmSpec
from armkit.programs.passes import absent, rewrite, scan

logger = logging.getLogger(__name__)

BAR = "|"
TICK = "@"
PAIR_BASE = 0xAC00
PAIR_ROOM = 11172
BLOCK_START = ("before", None, None)

SOURCE_BODY = """\
01: read(r1)
02: r3 <- ruler(r1)
03: r2 <- history(r1)
04: if valid_history(r1, r3, r2) then goto(06)
05: halt_reject
06: if all_ticked(r2) then goto(09)
07: r2 <- compare_column(r2)
08: goto(06)
09: halt_accept
"""

Cell = Tuple[str, Optional[str]]


@dataclass(frozen=True)
class CellCodec:
    """Columns of the history register as single characters."""
    symbols: Tuple[str, ...]
    states: Tuple[str, ...]

    @cached_property
    def cells(self) -> List[Cell]:
        return [(a, q) for a in self.symbols for q in (None,) + self.states]

    @cached_property
    def _index(self) -> Dict[Cell, int]:
        return {cell: i for i, cell in enumerate(self.cells)}

    def char(self, top: Cell, bottom: Cell) -> str:
        return chr(PAIR_BASE + self._index[top] * len(self.cells) + self._index[bottom])

    def pair(self, ch: str) -> Tuple[Cell, Cell]:
        top, bottom = divmod(ord(ch) - PAIR_BASE, len(self.cells))
        return self.cells[top], self.cells[bottom]

    @cached_property
    def pairs(self) -> str:
        size = len(self.cells)
        return "".join(chr(PAIR_BASE + i) for i in range(size * size))


def _codec(t: NtmSpec) -> CellCodec:
    codec = CellCodec(tuple(sorted(t.tape_alphabet)), tuple(t.states))
    if len(codec.cells) ** 2 > PAIR_ROOM:
        raise GenerationError(f"{len(codec.cells)} configuration cells do not fit in one column alphabet")
    return codec


def _moves(t: NtmSpec, state: str, symbol: str):
    moves = set(t.moves(state, symbol))
    if state == t.accept:
        moves.add((state, symbol, 0))
    return moves


class _Ops:
    def __init__(self, t: NtmSpec, codec: CellCodec):
        self.t = t
        self.codec = codec
        self.inputs = "".join(sorted(t.input_alphabet))
        self.history_chars = codec.pairs + BAR
        self.ticked = self.history_chars + TICK

    def ruler(self):
        """'1' per input character plus the constant part of the space bound."""
        extra = self.t.space[0]

        def final(empty):
            return "1" * (max(1, extra) if empty else extra)

        return rewrite(lambda empty, ch: (False, "1"), [self.inputs], "1", name="ruler",
                       initial=True, final=final, bound=max(1, extra))

    def _column(self, block, top: Cell, bottom: Cell, want: Optional[str] = None):
        """One column of a block: (phase, pending, bottom state) or None.

        `want` is the state the top row's head must carry.
        """
        t = self.t
        phase, left, landed = block
        (ta, tq), (ba, bq) = top, bottom
        if phase == "before":
            if tq is None:
                if left is not None or ba != ta:
                    return None
                return ("before", bq, landed)
            if want is not None and tq != want:
                return None
            moves = _moves(t, tq, ta)
            if left is not None:
                ok = bq is None and (left, ba, -1) in moves
                return ("after", None, left) if ok else None
            if bq is not None:
                return ("after", None, bq) if (bq, ba, 0) in moves else None
            targets = frozenset(q for q, b, d in moves if b == ba and d == 1)
            return ("right", targets, None) if targets else None
        if tq is not None or ba != ta:
            return None
        if phase == "right":
            return ("after", None, bq) if bq in left else None
        return None if bq is not None else block

    def history(self) -> AutomaticRelation:
        """Histories that are consistent column by column.

        The first block is the start configuration on the input, as long as
        the space bound; every column is a legal move; each block starts in
        the state the previous one ended in; only the last block accepts.
        Whether a block's bottom row matches the next block's top row is
        left to compare_column.
        """
        t, codec = self.t, self.codec
        c = t.space[0]

        def need(seen_input: bool) -> int:
            return c if seen_input else max(1, c)

        def step(state, sym):
            ch, col = sym
            first, seen_input, extra, want, block = state
            if col == PAD:
                return None
            if col == BAR:
                if block[0] != "after" or block[2] == t.accept:
                    return None
                if first and (ch != PAD or extra != need(seen_input)):
                    return None
                return (False, seen_input, extra, block[2], BLOCK_START)
            top, bottom = codec.pair(col)
            if first:
                fresh = not seen_input and extra == 0
                if ch != PAD:
                    expected = (ch, t.start if fresh else None)
                    seen_input = True
                else:
                    if extra >= need(seen_input):
                        return None
                    expected = (t.blank, t.start if fresh else None)
                    extra += 1
                if top != expected:
                    return None
            nxt = self._column(block, top, bottom, want)
            if nxt is None:
                return None
            return (first, seen_input, extra, want, nxt)

        def accept(state):
            first, seen_input, extra, _, block = state
            if first and extra != need(seen_input):
                return False
            return block[0] == "after" and block[2] == t.accept

        pred = scan(step, accept, [self.inputs, self.history_chars], name="history",
                    initial=(True, False, 0, None, BLOCK_START), ragged=True)
        return AutomaticRelation(automaton=pred.automaton, bound=None, arity=1, name="history")

    def valid_history(self):
        """C1 is the start configuration on the input and exactly as long as the ruler,
        every column is one legal move and the last block ends accepting."""
        t, codec = self.t, self.codec

        def step(state, sym):
            ch, ruler, col = sym
            first, fresh, block = state
            if col == PAD:
                return None
            if col == BAR:
                if block[0] != "after" or (first and (ruler != PAD or ch != PAD)):
                    return None
                return (False, False, BLOCK_START)
            top, bottom = codec.pair(col)
            if first:
                if ruler == PAD:
                    return None
                expected = (ch if ch != PAD else t.blank, t.start if fresh else None)
                if top != expected:
                    return None
            nxt = self._column(block, top, bottom)
            if nxt is None:
                return None
            return (first, False, nxt)

        def accept(state):
            _, _, block = state
            return block[0] == "after" and block[2] == t.accept

        return scan(step, accept, [self.inputs, "1", self.history_chars], name="valid_history",
                    initial=(True, True, BLOCK_START), ragged=True)

    def all_ticked(self):
        return absent(self.codec.pairs, self.ticked, "all_ticked")

    def compare_column(self):
        """Tick the first unticked column of every block; the bottom cell of one
        block must equal the top cell of the next, and all blocks run out together."""
        codec = self.codec

        def step(state, ch):
            carry, blocks, seeking = state
            if ch == BAR:
                if seeking:
                    if blocks == "open":
                        return None
                    return (None, "spent", True), ch
                return (carry, blocks, True), ch
            if ch == TICK or not seeking:
                return state, ch
            top, bottom = codec.pair(ch)
            if blocks == "spent" or (carry is not None and top != carry):
                return None
            return (bottom, "open", False), TICK

        def final(state):
            _, blocks, seeking = state
            return None if seeking and blocks == "open" else ""

        return rewrite(step, [self.ticked], self.ticked, name="compare_column",
                       initial=(None, "start", True), final=final)

    def registry(self):
        return {name: getattr(self, name)() for name in
                ("ruler", "history", "valid_history", "all_ticked", "compare_column")}


def gen_nspace_sim(t: NtmSpec) -> Program:
    """UNARM program accepting what the space-bounded machine t accepts.

    Only space bounds n + c keep the ruler a bounded function.
    """
    if len(t.space) != 2 or t.space[1] != 1 or t.space[0] < 0:
        raise GenerationError("the space bound must have the form n + c")
    if t.start not in t.states or t.accept not in t.states:
        raise GenerationError("start and accept must be states of the machine")
    if not t.input_alphabet <= t.tape_alphabet or t.blank not in t.tape_alphabet:
        raise GenerationError("inputs and blank must be tape symbols")
    codec = _codec(t)
    ops = _Ops(t, codec)
    text = "\n".join(["; configuration-history simulation", "machine UNARM",
                      f"input {' '.join(sorted(t.input_alphabet))}" if t.input_alphabet else ""])
    program = parse_program(text + "\n" + SOURCE_BODY, registry=ops.registry(), name="nspace_sim")
    logger.info("generated history simulation: %d states, %d tape symbols", len(t.states),
                len(t.tape_alphabet))
    return program


# ---------- certificates ----------

Config = Tuple[str, int, Tuple[str, ...]]


def _successors(t: NtmSpec, conf: Config) -> List[Config]:
    state, head, tape = conf
    out = []
    for q, b, d in sorted(t.moves(state, tape[head])):
        pos = head + d
        if 0 <= pos < len(tape):
            out.append((q, pos, tape[:head] + (b,) + tape[head + 1:]))
    return out


def accepting_run(t: NtmSpec, word: str) -> Optional[List[Config]]:
    """Shortest accepting computation within the space bound, by breadth-first search."""
    m = t.space_bound(len(word))
    if len(word) > m:
        return None
    start: Config = (t.start, 0, tuple(word) + (t.blank,) * (m - len(word)))
    parent: Dict[Config, Optional[Config]] = {start: None}
    queue = deque([start])
    while queue:
        conf = queue.popleft()
        if conf[0] == t.accept:
            path = []
            node: Optional[Config] = conf
            while node is not None:
                path.append(node)
                node = parent[node]
            return path[::-1]
        for nxt in _successors(t, conf):
            if nxt not in parent:
                parent[nxt] = conf
                queue.append(nxt)
    return None


def render_history(t: NtmSpec, run: List[Config]) -> str:
    """The two-row register for a computation; a lone accepting start repeats itself."""
    codec = _codec(t)
    if len(run) == 1:
        run = run * 2

    def cells(conf: Config) -> List[Cell]:
        state, head, tape = conf
        return [(a, state if i == head else None) for i, a in enumerate(tape)]

    blocks = [
        "".join(codec.char(top, bottom) for top, bottom in zip(cells(a), cells(b)))
        for a, b in zip(run, run[1:])
    ]
    return BAR.join(blocks)


def history_witness(t: NtmSpec, word: str) -> Optional[str]:
    run = accepting_run(t, word)
    return None if run is None else render_history(t, run)


def zeros_ones_ntm() -> NtmSpec:
    """Crosses off one 0 and one 1 per sweep; accepts 0^n 1^n in n + 1 cells."""
    moves = {
        ("q0", "0"): {("q1", "X", 1)},
        ("q0", "Y"): {("q3", "Y", 1)},
        ("q0", "_"): {("acc", "_", 0)},
        ("q1", "0"): {("q1", "0", 1)},
        ("q1", "Y"): {("q1", "Y", 1)},
        ("q1", "1"): {("q2", "Y", -1)},
        ("q2", "0"): {("q2", "0", -1)},
        ("q2", "Y"): {("q2", "Y", -1)},
        ("q2", "X"): {("q0", "X", 1)},
        ("q3", "Y"): {("q3", "Y", 1)},
        ("q3", "_"): {("acc", "_", 0)},
    }
    return NtmSpec(
        states=("q0", "q1", "q2", "q3", "acc"),
        input_alphabet=frozenset("01"),
        tape_alphabet=frozenset("01XY_"),
        blank="_",
        start="q0",
        accept="acc",
        transitions={k: frozenset(v) for k, v in moves.items()},
        space=(1, 1),
    )

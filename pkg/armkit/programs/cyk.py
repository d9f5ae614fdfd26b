"""CYK recognition over two diagonal registers.

Every table entry alpha_ij (a set of nonterminals) is one machine character.
After layer k, with ':' between blocks and '_' as filler,

    r2 (left)   pad blocks of widths 1..k+1, then L_1 : L_2 : ... : L_n
    r3 (right)  R_1 : R_2 : ... : R_n, then pad blocks of widths k+1..1

where L_i = alpha_i,i .. alpha_i,i+k and R_j = alpha_j-k,j .. alpha_j,j
(clipped at the table border). The blocks line up column by column, so
L_i sits over R_i+k+1 and their cells pair exactly the splits of
alpha_i,i+k+1. One pass per register computes the whole next layer onto
the separators; the entries are then inserted one per step, every pad
block grows by one and a new width-1 pad block is added at the outer end.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, Sequence, Tuple

from armkit import config
from armkit.errors import GenerationError
from armkit.machine.parser import parse_program
from armkit.machine.program import Program
from armkit.programs.instances import BooleanGrammar, BooleanRule, CnfGrammar
from armkit.programs.passes import LTR, RTL, absent, rewrite, scan

logger = logging.getLogger(__name__)

FILL = "_"
COLON = ":"
PENDING_FILL = "+"
SUBSET_BASE = 0x2800

SOURCE_BODY = """\
01: read(r1)
02: if empty(r1) then goto(99)
03: r2 <- unit_sets(r1)
04: if separated(r2) then goto(07)
05: r2 <- separate(r2)
06: goto(04)
07: r3 <- append_pad(r2)
08: r2 <- prepend_pad(r2)
10: if no_complete_column(r2, r3) then goto(30)
11: r4 <- combine_left(r2, r3)
12: r3 <- combine_right(r2, r3)
13: r2 <- r4
14: if no_pending(r2) then goto(17)
15: r2 <- insert_left(r2)
16: goto(14)
17: if no_pending(r3) then goto(20)
18: r3 <- insert_right(r3)
19: goto(17)
20: r2 <- prepend_pad(r2)
21: r3 <- append_pad(r3)
22: goto(10)
30: if start_derives(r2) then goto(32)
31: halt_reject
32: halt_accept
99: halt_reject
"""

# line reached once per layer, with the registers in the layout above
LAYER_LINE = 10


@dataclass(frozen=True)
class SubsetCodec:
    """Subsets of the nonterminals as single characters."""
    names: Tuple[str, ...]

    @property
    def size(self) -> int:
        return 2 ** len(self.names)

    def char(self, subset: FrozenSet[str]) -> str:
        mask = sum(1 << i for i, name in enumerate(self.names) if name in subset)
        return chr(SUBSET_BASE + mask)

    def pending(self, subset: FrozenSet[str]) -> str:
        return chr(ord(self.char(subset)) + self.size)

    def subset(self, ch: str) -> FrozenSet[str]:
        mask = (ord(ch) - SUBSET_BASE) % self.size
        return frozenset(name for i, name in enumerate(self.names) if mask >> i & 1)

    @cached_property
    def cells(self) -> str:
        return "".join(chr(SUBSET_BASE + m) for m in range(self.size))

    @cached_property
    def pendings(self) -> str:
        return "".join(chr(SUBSET_BASE + self.size + m) for m in range(self.size))

    def is_cell(self, ch: str) -> bool:
        return SUBSET_BASE <= ord(ch) < SUBSET_BASE + self.size

    def is_pending(self, ch: str) -> bool:
        return SUBSET_BASE + self.size <= ord(ch) < SUBSET_BASE + 2 * self.size


def _heads(rules: Sequence[BooleanRule], seen: FrozenSet[Tuple[str, str]]) -> FrozenSet[str]:
    """Nonterminals with a rule whose conjuncts hold for one table entry.

    `seen` holds the concatenations BC found over some split. Entries span
    at least two symbols, so a 'not empty' conjunct always holds.
    """
    return frozenset(
        r.head for r in rules
        if all(p in seen for p in r.positive) and not any(q in seen for q in r.negative)
    )


class _Ops:
    def __init__(self, codec: SubsetCodec, terminals: str, unit: Dict[str, FrozenSet[str]],
                 rules: Sequence[BooleanRule], start: str):
        self.codec = codec
        self.terminals = terminals
        self.unit = unit
        self.rules = tuple(rules)
        self.start = start
        self.conjuncts = frozenset(p for r in self.rules for p in r.positive + r.negative)
        self.grid = codec.cells + FILL + COLON
        self.marked = self.grid + codec.pendings + PENDING_FILL

    def empty(self):
        return scan(lambda s, ch: None, lambda s: True, [self.terminals], name="empty")

    def unit_sets(self):
        return rewrite(lambda s, ch: (s, self.codec.char(self.unit.get(ch, frozenset()))),
                       [self.terminals], self.codec.cells, name="unit_sets", initial=0)

    def separated(self):
        cells = self.codec.cells

        def step(prev_cell, ch):
            if ch in cells and prev_cell:
                return None
            return ch in cells

        return scan(step, lambda s: True, [self.grid], name="separated", initial=False)

    def separate(self):
        """A ':' between the first two neighbouring cells."""
        cells = self.codec.cells

        def step(state, ch):
            prev_cell, done = state
            if not done and prev_cell and ch in cells:
                return (True, True), COLON + ch
            return (ch in cells, done), ch

        return rewrite(step, [self.grid], self.grid, name="separate", initial=(False, False), bound=1)

    def append_pad(self):
        return rewrite(lambda s, ch: (s, ch), [self.grid], self.grid, name="append_pad",
                       initial=0, final=lambda s: COLON + FILL, bound=2)

    def prepend_pad(self):
        return rewrite(lambda s, ch: (s, ch), [self.grid], self.grid, name="prepend_pad",
                       direction=RTL, initial=0, final=lambda s: FILL + COLON, bound=2)

    def no_complete_column(self):
        def step(real, sym):
            left, right = sym
            if left == COLON or right == COLON:
                if left != right or real:
                    return None
                return True
            return real and left != FILL and right != FILL

        return scan(step, lambda real: not real, [self.grid, self.grid],
                    name="no_complete_column", initial=True)

    def _combine(self, left_side: bool):
        codec = self.codec

        def step(state, sym):
            left, right = sym
            real, padded, seen = state
            if left == COLON:
                if real:
                    out = codec.pending(_heads(self.rules, seen))
                else:
                    out = PENDING_FILL if padded else COLON
                return (True, False, frozenset()), out
            mine = left if left_side else right
            if left == FILL or right == FILL:
                return (False, padded or mine == FILL, seen), mine
            found = {
                (b, c) for b, c in self.conjuncts
                if b in codec.subset(left) and c in codec.subset(right)
            }
            return (real, padded, seen | found), mine

        name = "combine_left" if left_side else "combine_right"
        return rewrite(step, [self.grid, self.grid], self.marked, name=name,
                       direction=LTR if left_side else RTL, initial=(True, False, frozenset()))

    def combine_left(self):
        """Next-layer entry (or a filler request) on the ':' after each left block."""
        return self._combine(True)

    def combine_right(self):
        """Next-layer entry (or a filler request) on the ':' before each right block."""
        return self._combine(False)

    def _insert(self, before: bool):
        codec = self.codec

        def step(done, ch):
            if done or not (ch == PENDING_FILL or codec.is_pending(ch)):
                return done, ch
            cell = FILL if ch == PENDING_FILL else codec.char(codec.subset(ch))
            return True, cell + COLON if before else COLON + cell

        name = "insert_left" if before else "insert_right"
        return rewrite(step, [self.marked], self.marked, name=name, initial=False, bound=1)

    def insert_left(self):
        return self._insert(True)

    def insert_right(self):
        return self._insert(False)

    def no_pending(self):
        return absent(self.codec.pendings + PENDING_FILL, self.marked, "no_pending")

    def start_derives(self):
        """The start symbol is in the last entry of the first left block."""
        codec = self.codec

        def step(state, ch):
            phase, last = state
            if phase == "done":
                return state
            if codec.is_cell(ch):
                return "in", ch
            if ch == COLON and phase == "in":
                return "done", last
            return state

        def accept(state):
            return state[1] is not None and self.start in codec.subset(state[1])

        return scan(step, accept, [self.grid], name="start_derives", initial=("pads", None))

    def registry(self):
        names = [
            "empty", "unit_sets", "separated", "separate", "append_pad", "prepend_pad",
            "no_complete_column", "combine_left", "combine_right", "insert_left",
            "insert_right", "no_pending", "start_derives",
        ]
        return {name: getattr(self, name)() for name in names}


def _generate(nonterminals: Sequence[str], terminals: FrozenSet[str], rules: Sequence[BooleanRule],
              unit: Sequence[Tuple[str, str]], start: str, kind: str) -> Program:
    codec = SubsetCodec(tuple(nonterminals))
    if codec.size > config.ALPHABET_CEILING:
        raise GenerationError(
            f"{len(nonterminals)} nonterminals need {codec.size} symbols; "
            f"ARM_ALPHABET_CEILING is {config.ALPHABET_CEILING}"
        )
    sets: Dict[str, set] = {}
    for head, terminal in unit:
        sets.setdefault(terminal, set()).add(head)
    terms = "".join(sorted(terminals))
    ops = _Ops(codec, terms, {t: frozenset(h) for t, h in sets.items()}, rules, start)
    text = "\n".join([f"; {kind} CYK over diagonal registers", "machine DARM",
                      f"input {json.dumps(terms)}"]) + "\n" + SOURCE_BODY
    program = parse_program(text, registry=ops.registry(), name=f"{kind}_cyk")
    logger.info("generated %s CYK program: %d nonterminals, %d rules", kind, len(nonterminals), len(rules))
    return program


def gen_cyk_program(g: CnfGrammar) -> Program:
    rules = [BooleanRule(head, ((left, right),)) for head, left, right in g.binary]
    return _generate(g.nonterminals, g.terminals, rules, g.unit, g.start, "cnf")


def gen_boolean_cyk_program(g: BooleanGrammar) -> Program:
    return _generate(g.nonterminals, g.terminals, g.rules, g.unit, g.start, "boolean")


def read_left_blocks(left: str, nonterminals: Sequence[str]) -> Dict[Tuple[int, int], FrozenSet[str]]:
    """Table entries alpha_ij held by a left diagonal register."""
    codec = SubsetCodec(tuple(nonterminals))
    table: Dict[Tuple[int, int], FrozenSet[str]] = {}
    blocks: List[str] = [b for b in left.split(COLON) if b and FILL not in b]
    for i, block in enumerate(blocks, start=1):
        for offset, ch in enumerate(block):
            table[(i, i + offset)] = codec.subset(ch)
    return table

"""Bit-exact instance encodings and their parsers.

Graphs come in three interchangeable renderings:

* the caret form `|^0^1|0010|10|0000|`, rows `|v_i|e_i1..e_in` with every
  bit of a source's name prefixed by '^';
* the membership form, the unticked rows followed by one bit per vertex;
* the tape form the graph programs run on, one character per bit carrying
  the bit, whether it starts a field and the tick (or, after the BFS
  variant ran, a distance bit).

Entries sit next to each other without separators, so the tape form marks
the first bit of every field.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from itertools import product
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from armkit.errors import CodingError, EncodingError, NiceFormatError
from armkit.programs.instances import CnfFormula, GraphInstance, QbfInstance, clause_variables

SEP = "|"


def field_width(n: int) -> int:
    return max(1, math.ceil(math.log2(n + 1)))


def binary(value: int, width: int) -> str:
    return format(value, "b").zfill(width)


# ---------- graph tape cells ----------

@dataclass(frozen=True)
class Cell:
    bit: int
    first: bool = False
    tick: bool = False
    dist: Optional[int] = None


def _cell_table() -> Dict[Cell, str]:
    table: Dict[Cell, str] = {}
    for (tick, first), chars in {
        (False, False): "01",
        (False, True): "ab",
        (True, False): "23",
        (True, True): "cd",
    }.items():
        for bit in (0, 1):
            table[Cell(bit, first, tick)] = chars[bit]
    letters = iter("efghijkl")
    for first, bit, dist in product((False, True), (0, 1), (0, 1)):
        table[Cell(bit, first, dist=dist)] = next(letters)
    return table


CELL_CHARS: Dict[Cell, str] = _cell_table()
CELLS: Dict[str, Cell] = {ch: c for c, ch in CELL_CHARS.items()}
TAPE_INPUT = frozenset(ch for c, ch in CELL_CHARS.items() if c.dist is None) | {SEP}
TAPE_ALPHABET = frozenset(CELLS) | {SEP}


def cell_of(ch: str) -> Optional[Cell]:
    """None for the separator."""
    return CELLS.get(ch)


def char_of(cell: Cell) -> str:
    return CELL_CHARS[cell]


def with_bit(cell: Cell, **changes) -> Optional[str]:
    """Character of the changed cell; None when no character carries it."""
    return CELL_CHARS.get(replace(cell, **changes))


# ---------- graphs ----------

def encode_graph(g: GraphInstance, ticked: bool = True, membership: bool = False) -> str:
    """Caret form; with membership=True the sources follow as a bitstring instead."""
    if g.n < 1:
        raise EncodingError("a graph needs at least one vertex")
    for v in g.sources | {x for e in g.edges for x in e}:
        if not 1 <= v <= g.n:
            raise EncodingError(f"vertex {v} outside 1..{g.n}")
    w = field_width(g.n)
    zero = "0" * w
    parts = [SEP]
    for i in range(1, g.n + 1):
        name = binary(i, w)
        if ticked and not membership and i in g.sources:
            name = "".join("^" + b for b in name)
        row = "".join(binary(j, w) if g.has_edge(i, j) else zero for j in range(1, g.n + 1))
        parts.append(f"{name}{SEP}{row}{SEP}")
    text = "".join(parts)
    if membership:
        text += "".join("1" if i in g.sources else "0" for i in range(1, g.n + 1))
    return text


def _split_rows(s: str) -> Tuple[List[str], str]:
    if not s.startswith(SEP):
        raise EncodingError("graph string must start with '|'")
    body, _, tail = s.rpartition(SEP)
    fields = body[1:].split(SEP)
    if len(fields) % 2:
        raise EncodingError("graph string must alternate vertex and edge fields")
    return fields, tail


def parse_graph(s: str) -> Tuple[int, List[Tuple[str, bool]], List[str]]:
    """Caret or membership form -> (w, [(name bits, ticked)], edge rows)."""
    fields, tail = _split_rows(s)
    names: List[Tuple[str, bool]] = []
    rows: List[str] = []
    for v_field, e_field in zip(fields[0::2], fields[1::2]):
        ticked = v_field.startswith("^")
        bits = v_field.replace("^", "")
        if ticked and v_field != "".join("^" + b for b in bits):
            raise EncodingError(f"vertex field {v_field!r} is partly ticked")
        names.append((bits, ticked))
        rows.append(e_field)
    n = len(names)
    if n == 0:
        raise EncodingError("graph string has no rows")
    w = len(names[0][0])
    for i, ((bits, _), row) in enumerate(zip(names, rows), start=1):
        if bits != binary(i, w) or len(row) != n * w or set(row) - set("01"):
            raise EncodingError(f"row {i} is malformed")
    if w != field_width(n):
        raise EncodingError(f"field width {w} does not match {n} vertices")
    if tail:
        if len(tail) != n or set(tail) - set("01") or any(t for _, t in names):
            raise EncodingError("membership bits must follow an unticked graph, one per vertex")
        names = [(bits, tail[i] == "1") for i, (bits, _) in enumerate(names)]
    return w, names, rows


def decode_graph(s: str) -> GraphInstance:
    w, names, rows = parse_graph(s)
    n = len(names)
    edges = set()
    for i, row in enumerate(rows, start=1):
        for j in range(1, n + 1):
            entry = row[(j - 1) * w: j * w]
            if entry == binary(j, w):
                edges.add((i, j))
            elif entry != "0" * w:
                raise EncodingError(f"entry e_{i},{j} is neither {binary(j, w)} nor zero")
    return GraphInstance.build(n, edges, [i for i, (_, t) in enumerate(names, start=1) if t])


def graph_tape(s: str) -> str:
    """Caret or membership form -> the tape the graph programs read."""
    w, names, rows = parse_graph(s)
    out = [SEP]
    for (bits, ticked), row in zip(names, rows):
        out.extend(char_of(Cell(int(b), k == 0, ticked)) for k, b in enumerate(bits))
        out.append(SEP)
        out.extend(char_of(Cell(int(b), k % w == 0)) for k, b in enumerate(row))
        out.append(SEP)
    return "".join(out)


def _tape_fields(t: str) -> List[List[Cell]]:
    if not t.startswith(SEP) or not t.endswith(SEP):
        raise EncodingError("tape must start and end with '|'")
    fields = []
    for chunk in t[1:-1].split(SEP):
        cells = [cell_of(ch) for ch in chunk]
        if any(c is None for c in cells):
            raise EncodingError(f"unknown tape characters in {chunk!r}")
        fields.append(cells)
    if len(fields) % 2:
        raise EncodingError("tape must alternate vertex and edge fields")
    return fields


def untape(t: str) -> str:
    """Tape form -> caret form; distance bits are dropped."""
    out = [SEP]
    for idx, cells in enumerate(_tape_fields(t)):
        if idx % 2 == 0:
            out.append("".join(("^" if c.tick else "") + str(c.bit) for c in cells))
        else:
            out.append("".join(str(c.bit) for c in cells))
        out.append(SEP)
    return "".join(out)


def _is_tape(s: str) -> bool:
    return not set(s) <= set("01^" + SEP)


def decode_reachable(s: str) -> FrozenSet[int]:
    """Ticked vertices of any rendering."""
    if _is_tape(s):
        v_fields = _tape_fields(s)[0::2]
        return frozenset(i for i, cells in enumerate(v_fields, start=1) if cells and cells[0].tick)
    _, names, _ = parse_graph(s)
    return frozenset(i for i, (_, ticked) in enumerate(names, start=1) if ticked)


def decode_distances(t: str) -> Dict[int, int]:
    """Distance annotations written by the BFS program; unreached vertices are absent."""
    out: Dict[int, int] = {}
    for i, cells in enumerate(_tape_fields(t)[0::2], start=1):
        if cells and all(c.dist is not None for c in cells):
            out[i] = int("".join(str(c.dist) for c in cells), 2)
    return out


# ---------- 3SAT ----------

def _check_nice(f: CnfFormula) -> None:
    if f.k < 1:
        raise NiceFormatError("a formula needs at least one variable")
    used: Set[int] = set()
    for clause in f.clauses:
        if len(clause) != 3:
            raise EncodingError(f"clause {clause} does not have exactly three literals")
        for lit in clause:
            if lit == 0 or abs(lit) > f.k:
                raise NiceFormatError(f"literal {lit} outside variables 1..{f.k}")
            used.add(abs(lit))
    missing = set(range(1, f.k + 1)) - used
    if missing:
        raise NiceFormatError(f"variables {sorted(missing)} are never used")


def encode_3sat(f: CnfFormula) -> str:
    if not f.clauses:
        raise EncodingError("a formula needs at least one clause")
    _check_nice(f)
    w = field_width(f.k)
    return "&".join(
        "|".join(binary(abs(lit), w) + ("+" if lit > 0 else "-") for lit in clause)
        for clause in f.clauses
    )


_LITERAL = re.compile(r"^([01]+)([+-])$")


def parse_3sat(s: str) -> CnfFormula:
    clauses = []
    widths = set()
    for part in s.split("&"):
        lits = []
        for tok in part.split("|"):
            m = _LITERAL.match(tok)
            if not m:
                raise EncodingError(f"bad literal {tok!r}")
            widths.add(len(m.group(1)))
            value = int(m.group(1), 2)
            lits.append(value if m.group(2) == "+" else -value)
        if len(lits) != 3:
            raise EncodingError(f"clause {part!r} does not have exactly three literals")
        clauses.append(tuple(lits))
    k = max(abs(lit) for clause in clauses for lit in clause)
    f = CnfFormula(k=k, clauses=tuple(clauses))
    _check_nice(f)
    if widths != {field_width(k)}:
        raise NiceFormatError(f"variable names must all have {field_width(k)} digits")
    return f


# ---------- QSAT ----------

def check_coding(q: QbfInstance) -> None:
    m = q.m
    if m < 1:
        raise CodingError("no quantified variables")
    if set(q.quantifiers) - {"E", "A"}:
        raise CodingError("quantifiers are 'E' or 'A'")
    if not q.clauses or any(not clause for clause in q.clauses):
        raise CodingError("clauses must be non-empty")
    used = clause_variables(q.clauses)
    if any(not 0 <= v < m for v in used):
        raise CodingError(f"variable names must lie in 0..{m - 1}")
    if used != frozenset(range(m)):
        raise CodingError(f"variables {sorted(set(range(m)) - used)} never occur")
    sets = [frozenset(clause) for clause in q.clauses]
    for a, sa in enumerate(sets):
        for b, sb in enumerate(sets):
            if a != b and sa <= sb:
                raise CodingError(f"clause {a + 1} implies clause {b + 1}")


def encode_qsat(q: QbfInstance) -> str:
    check_coding(q)
    k = q.name_width
    prefix = " ".join(q.quantifier_of(v) + binary(v, k) for v in range(q.m - 1, -1, -1))
    inner = ";".join(
        ",".join(("+" if pos else "-") + binary(var, k) + "_" for var, pos in clause)
        for clause in q.clauses
    )
    return f"{prefix} [{inner}]"


_QBF = re.compile(r"^((?:[EA][01]+ )+)\[(.*)\]$")
_QLIT = re.compile(r"^([+-])([01]+)_$")


def parse_qsat(s: str) -> QbfInstance:
    m = _QBF.match(s)
    if not m:
        raise CodingError("expected 'Q name ... [clauses]'")
    items = m.group(1).split()
    widths = {len(item) - 1 for item in items}
    quantifiers = tuple(item[0] for item in items)
    names = [int(item[1:], 2) for item in items]
    if names != list(range(len(items) - 1, -1, -1)):
        raise CodingError("the prefix must name variables m-1 down to 0")
    clauses = []
    for part in m.group(2).split(";"):
        lits = []
        for tok in part.split(","):
            lm = _QLIT.match(tok)
            if not lm:
                raise CodingError(f"bad literal {tok!r}")
            widths.add(len(lm.group(2)))
            lits.append((int(lm.group(2), 2), lm.group(1) == "+"))
        clauses.append(tuple(lits))
    q = QbfInstance(quantifiers=quantifiers, clauses=tuple(clauses))
    if widths != {q.name_width}:
        raise CodingError(f"variable names must all have {q.name_width} digits")
    check_coding(q)
    return q

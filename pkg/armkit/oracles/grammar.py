"""Textbook membership tests for the three grammar forms."""
from typing import Dict, List, Set, Tuple, Union

from armkit.programs.instances import BooleanGrammar, CnfGrammar, GreibachGrammar

Grammar = Union[CnfGrammar, BooleanGrammar, GreibachGrammar]


def _unit_table(unit, w: str) -> List[Set[str]]:
    return [{head for head, terminal in unit if terminal == ch} for ch in w]


def cyk(g: CnfGrammar, w: str) -> bool:
    n = len(w)
    if n == 0:
        return False
    table: Dict[Tuple[int, int], Set[str]] = {}
    for i, heads in enumerate(_unit_table(g.unit, w)):
        table[(i, i)] = heads
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            j = i + span - 1
            cell = set()
            for k in range(i, j):
                for head, left, right in g.binary:
                    if left in table[(i, k)] and right in table[(k + 1, j)]:
                        cell.add(head)
            table[(i, j)] = cell
    return g.start in table[(0, n - 1)]


def boolean_cyk(g: BooleanGrammar, w: str) -> bool:
    """Binary Normal Form: an entry holds A when every positive pair of some
    rule for A splits the substring and no negative pair does."""
    n = len(w)
    if n == 0:
        return False
    table: Dict[Tuple[int, int], Set[str]] = {}
    for i, heads in enumerate(_unit_table(g.unit, w)):
        table[(i, i)] = heads
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            j = i + span - 1

            def splits(pair):
                b, c = pair
                return any(b in table[(i, k)] and c in table[(k + 1, j)] for k in range(i, j))

            table[(i, j)] = {
                rule.head for rule in g.rules
                if all(splits(p) for p in rule.positive) and not any(splits(q) for q in rule.negative)
            }
    return g.start in table[(0, n - 1)]


def greibach(g: GreibachGrammar, w: str) -> bool:
    """Every leftmost derivation; each step reads one terminal, so the
    sentential form never needs more nonterminals than input left."""
    if not w:
        return False
    rules: Dict[Tuple[str, str], List[Tuple[str, ...]]] = {}
    for head, terminal, tail in g.rules:
        rules.setdefault((head, terminal), []).append(tuple(tail))
    frontier = {(g.start,)}
    for pos, ch in enumerate(w):
        left = len(w) - pos - 1
        nxt = set()
        for stack in frontier:
            if not stack:
                continue
            for tail in rules.get((stack[0], ch), ()):
                grown = tail + stack[1:]
                if len(grown) <= left:
                    nxt.add(grown)
        frontier = nxt
    return () in frontier


def oracle_grammar(kind: str, g: Grammar, w: str) -> bool:
    if kind == "cnf":
        return cyk(g, w)
    if kind == "boolean":
        return boolean_cyk(g, w)
    if kind == "greibach":
        return greibach(g, w)
    raise ValueError(f"unknown grammar kind {kind!r}")

"""Problem instances the generated programs and the oracles work on."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Tuple

from armkit.errors import EncodingError, GenerationError

Literal = Tuple[int, bool]


@dataclass(frozen=True)
class CnfGrammar:
    """Chomsky Normal Form: A -> B C and A -> u, language without the empty word."""
    nonterminals: Tuple[str, ...]
    terminals: FrozenSet[str]
    binary: Tuple[Tuple[str, str, str], ...]
    unit: Tuple[Tuple[str, str], ...]
    start: str

    def __post_init__(self):
        names = set(self.nonterminals)
        if self.start not in names:
            raise GenerationError(f"start symbol {self.start!r} is not a nonterminal")
        for head, left, right in self.binary:
            if not {head, left, right} <= names:
                raise GenerationError(f"rule {head} -> {left} {right} uses unknown nonterminals")
        for head, terminal in self.unit:
            if head not in names or terminal not in self.terminals:
                raise GenerationError(f"rule {head} -> {terminal} is not a terminal rule")


@dataclass(frozen=True)
class BooleanRule:
    """A -> B1 C1 & ... & not D1 E1 & ... [& not empty]."""
    head: str
    positive: Tuple[Tuple[str, str], ...]
    negative: Tuple[Tuple[str, str], ...] = ()
    not_empty: bool = False


@dataclass(frozen=True)
class BooleanGrammar:
    """Binary Normal Form."""
    nonterminals: Tuple[str, ...]
    terminals: FrozenSet[str]
    rules: Tuple[BooleanRule, ...]
    unit: Tuple[Tuple[str, str], ...]
    start: str

    def __post_init__(self):
        names = set(self.nonterminals)
        if self.start not in names:
            raise GenerationError(f"start symbol {self.start!r} is not a nonterminal")
        for rule in self.rules:
            if not rule.positive:
                raise GenerationError(f"rule for {rule.head} needs a positive conjunct")
            used = {rule.head, *(x for pair in rule.positive + rule.negative for x in pair)}
            if not used <= names:
                raise GenerationError(f"rule for {rule.head} uses unknown nonterminals")
        for head, terminal in self.unit:
            if head not in names or terminal not in self.terminals:
                raise GenerationError(f"rule {head} -> {terminal} is not a terminal rule")


@dataclass(frozen=True)
class GreibachGrammar:
    """Rules A -> a alpha with a terminal and alpha a string of nonterminals."""
    nonterminals: Tuple[str, ...]
    terminals: FrozenSet[str]
    rules: Tuple[Tuple[str, str, Tuple[str, ...]], ...]
    start: str

    def __post_init__(self):
        names = set(self.nonterminals)
        if self.start not in names:
            raise GenerationError(f"start symbol {self.start!r} is not a nonterminal")
        for head, terminal, tail in self.rules:
            if head not in names or terminal not in self.terminals or not set(tail) <= names:
                raise GenerationError(f"rule {head} -> {terminal} {' '.join(tail)} is not in Greibach form")


@dataclass(frozen=True)
class GraphInstance:
    """Directed graph on vertices 1..n with a source set."""
    n: int
    edges: FrozenSet[Tuple[int, int]]
    sources: FrozenSet[int]

    @classmethod
    def build(cls, n: int, edges: Iterable[Tuple[int, int]], sources: Iterable[int]) -> "GraphInstance":
        if n < 1:
            raise EncodingError("a graph needs at least one vertex")
        edges = frozenset((int(i), int(j)) for i, j in edges)
        sources = frozenset(int(s) for s in sources)
        for v in {x for e in edges for x in e} | sources:
            if not 1 <= v <= n:
                raise EncodingError(f"vertex {v} outside 1..{n}")
        return cls(n=n, edges=edges, sources=sources)

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edges

    @property
    def adjacency(self) -> Tuple[Tuple[bool, ...], ...]:
        return tuple(
            tuple(self.has_edge(i, j) for j in range(1, self.n + 1)) for i in range(1, self.n + 1)
        )

    @property
    def is_sdag(self) -> bool:
        return all(i < j for i, j in self.edges)


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF over variables 1..k; a literal is +i or -i."""
    k: int
    clauses: Tuple[Tuple[int, int, int], ...]


@dataclass(frozen=True)
class QbfInstance:
    """Prenex QBF over variables m-1..0.

    quantifiers[i] is 'E' or 'A' for variable m-1-i, the prefix order.
    Each clause is a tuple of (variable, positive) literals.
    """
    quantifiers: Tuple[str, ...]
    clauses: Tuple[Tuple[Literal, ...], ...]

    @property
    def m(self) -> int:
        return len(self.quantifiers)

    @property
    def name_width(self) -> int:
        return max(1, (self.m - 1).bit_length())

    def quantifier_of(self, var: int) -> str:
        return self.quantifiers[self.m - 1 - var]


Move = int  # -1 left, 0 stay, +1 right


@dataclass(frozen=True)
class NtmSpec:
    """One-tape nondeterministic Turing machine working in bounded space.

    `space` holds coefficients of the space bound polynomial, lowest degree
    first. The head never leaves the space-bounded region.
    """
    states: Tuple[str, ...]
    input_alphabet: FrozenSet[str]
    tape_alphabet: FrozenSet[str]
    blank: str
    start: str
    accept: str
    transitions: Dict[Tuple[str, str], FrozenSet[Tuple[str, str, Move]]] = field(hash=False)
    space: Tuple[int, ...] = (0, 1)

    def space_bound(self, n: int) -> int:
        return max(1, sum(c * n ** i for i, c in enumerate(self.space)))

    def moves(self, state: str, symbol: str) -> FrozenSet[Tuple[str, str, Move]]:
        return self.transitions.get((state, symbol), frozenset())


def clause_variables(clauses: Iterable[Iterable[Literal]]) -> FrozenSet[int]:
    return frozenset(var for clause in clauses for var, _ in clause)

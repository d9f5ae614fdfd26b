from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from armkit.automata.automaton import State, TrackAutomaton
from armkit.automata.convolution import PAD, Symbol, convolve, is_pad, pads_of
from armkit.automata.operations import project, synchronized_product
from armkit.errors import ArityError, MalformedConvolutionError, UnboundedCompositionError
from armkit.schemas import RelationReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AutomaticRelation:
    """Automaton over `arity` input tracks followed by output tracks.

    bound None means unbounded.
    `direct`, when set, computes the single output without the automaton
    (passes over alphabets too large to materialize).
    """

    automaton: TrackAutomaton
    bound: Optional[int]
    arity: int = 1
    name: str = ""
    _memo: dict = field(default_factory=dict, repr=False, compare=False)
    direct: Optional[Callable[[Sequence[str]], Optional[str]]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.arity < self.automaton.track_count:
            raise ArityError(
                f"arity {self.arity} leaves no output track among {self.automaton.track_count}"
            )

    @property
    def coarity(self) -> int:
        return self.automaton.track_count - self.arity

    @property
    def bounded(self) -> bool:
        return self.bound is not None

    @property
    def alphabet(self):
        return self.automaton.alphabet

    @cached_property
    def io_index(self) -> Dict[Tuple[State, Symbol], List[Tuple[Symbol, State]]]:
        """(state, input part) -> [(output part, next state)]"""
        index: Dict[Tuple[State, Symbol], list] = defaultdict(list)
        k = self.arity
        for src, sym, dst in sorted(self.automaton.transitions, key=repr):
            index[(src, sym[:k])].append((sym[k:], dst))
        return dict(index)

    @cached_property
    def reverse_index(self) -> Dict[Tuple[State, Symbol], List[Tuple[State, Symbol]]]:
        """(next state, input part) -> [(state, output part)]"""
        index: Dict[Tuple[State, Symbol], list] = defaultdict(list)
        k = self.arity
        for src, sym, dst in sorted(self.automaton.transitions, key=repr):
            index[(dst, sym[:k])].append((src, sym[k:]))
        return dict(index)

    def contains(self, inputs: Sequence[str], outputs: Sequence[str]) -> bool:
        if self.direct is not None and self.coarity == 1:
            return self.direct(list(inputs)) == outputs[0]
        return self.automaton.accepts(convolve(list(inputs) + list(outputs)))


@dataclass(frozen=True, eq=False)
class AutomaticFunction:
    relation: AutomaticRelation
    functional_certificate: bool = False

    @property
    def automaton(self) -> TrackAutomaton:
        return self.relation.automaton

    @property
    def bound(self) -> Optional[int]:
        return self.relation.bound

    @property
    def arity(self) -> int:
        return self.relation.arity

    @property
    def name(self) -> str:
        return self.relation.name


@dataclass(frozen=True, eq=False)
class AutomaticPredicate:
    """k-track acceptor used as a branch condition."""

    automaton: TrackAutomaton
    name: str = ""
    _memo: dict = field(default_factory=dict, repr=False, compare=False)
    direct: Optional[Callable[[Sequence[str]], bool]] = field(default=None, repr=False, compare=False)

    @property
    def arity(self) -> int:
        return self.automaton.track_count

    def holds(self, args: Sequence[str]) -> bool:
        if len(args) != self.arity:
            raise ArityError(f"{self.name or 'predicate'} takes {self.arity} arguments")
        if self.direct is not None:
            return self.direct(list(args))
        current = frozenset(self.automaton.initial)
        width = max((len(a) for a in args), default=0)
        delta = self.automaton.delta
        for pos in range(width):
            sym = tuple(a[pos] if pos < len(a) else PAD for a in args)
            key = (current, sym)
            nxt = self._memo.get(key)
            if nxt is None:
                nxt = frozenset(d for s in current for d in delta.get((s, sym), ()))
                self._memo[key] = nxt
            if not nxt:
                return False
            current = nxt
        return bool(current & self.automaton.accepting)


def validate_relation(a: TrackAutomaton, arity: Optional[int] = None) -> RelationReport:
    """Well-formedness and length bound of an automaton read as a relation.

    A symbol counts towards the bound when its input part or its output part
    is entirely padding; on well-formed convolutions that count is exactly
    the length difference between outputs and inputs.
    """
    k = arity if arity is not None else a.track_count - 1
    if not 1 <= k < a.track_count:
        raise ArityError("validate_relation needs at least one input and one output track")

    # pad-tracker product; "bad" marks a resumed track
    bad = "bad"
    start = [(q, frozenset()) for q in a.initial]
    seen = set(start)
    queue = deque(start)
    wellformed = True
    while queue and wellformed:
        q, padded = queue.popleft()
        for sym, dst in a.outgoing.get(q, ()):
            pads = pads_of(sym)
            tracker = pads if padded != bad and padded <= pads else bad
            if tracker == bad:
                wellformed = False
                break
            node = (dst, tracker)
            if node not in seen:
                seen.add(node)
                queue.append(node)

    def weight(sym: Symbol) -> int:
        return 1 if is_pad(sym[:k]) or is_pad(sym[k:]) else 0

    bound = _longest_weighted_path(a, weight)
    return RelationReport(wellformed=wellformed, bound=bound)


def _longest_weighted_path(a: TrackAutomaton, weight) -> Optional[int]:
    """Max total weight over accepting paths; None when a positive-weight
    transition lies on a cycle."""
    index = {s: i for i, s in enumerate(sorted(a.states, key=repr))}
    comp = _scc(a, index)
    for src, sym, dst in a.transitions:
        if weight(sym) and comp[src] == comp[dst]:
            return None
    # condensation DAG; components come out of Tarjan in reverse topological order
    order = sorted(set(comp.values()), reverse=True)
    edges: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
    for src, sym, dst in a.transitions:
        if comp[src] != comp[dst]:
            edges[comp[src]].append((comp[dst], weight(sym)))
    best: Dict[int, int] = {}
    for c in order:
        if any(comp[s] == c for s in a.initial):
            best[c] = max(best.get(c, 0), 0)
        if c not in best:
            continue
        for nxt, w in edges.get(c, ()):
            if best.get(nxt, -1) < best[c] + w:
                best[nxt] = best[c] + w
    finals = [best[comp[s]] for s in a.accepting if comp[s] in best]
    return max(finals) if finals else 0


def _scc(a: TrackAutomaton, index: Dict[State, int]) -> Dict[State, int]:
    """Iterative Tarjan; component ids are assigned in reverse topological order."""
    succ = {s: [d for _, d in a.outgoing.get(s, ())] for s in a.states}
    low: Dict[State, int] = {}
    num: Dict[State, int] = {}
    comp: Dict[State, int] = {}
    stack: List[State] = []
    on_stack = set()
    counter = 0
    next_comp = 0
    for root in sorted(a.states, key=lambda s: index[s]):
        if root in num:
            continue
        work = [(root, iter(succ[root]))]
        num[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in num:
                    num[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], num[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == num[node]:
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    comp[member] = next_comp
                    if member == node:
                        break
                next_comp += 1
    return comp


def make_relation(a: TrackAutomaton, arity: int = 1, name: str = "") -> AutomaticRelation:
    """Wrap an automaton as a relation, computing its bound."""
    report = validate_relation(a, arity)
    if not report.wellformed:
        raise MalformedConvolutionError(f"{name or 'relation'} accepts malformed convolutions")
    return AutomaticRelation(automaton=a, bound=report.bound, arity=arity, name=name)


def pair_product(r: AutomaticRelation) -> TrackAutomaton:
    """Accepts conv(x, y, y') with (x,y), (x,y') in r and y != y'."""
    k, c = r.arity, r.coarity
    a = r.automaton
    in_pad = (PAD,) * k
    out_pad = (PAD,) * c
    index = r.io_index

    def moves(state, in_part):
        if state == "fin":
            return [(out_pad, "fin")] if in_part == in_pad else []
        opts = list(index.get((state, in_part), ()))
        if in_part == in_pad and state in a.accepting:
            opts.append((out_pad, "fin"))
        return opts

    def in_parts(state):
        if state == "fin":
            return {in_pad}
        parts = {sym[:k] for sym, _ in a.outgoing.get(state, ())}
        if state in a.accepting:
            parts.add(in_pad)
        return parts

    start = [(p, q, False) for p in a.initial for q in a.initial]
    seen = set(start)
    queue = deque(start)
    transitions = []
    while queue:
        node = queue.popleft()
        p, q, diff = node
        for in_part in sorted(in_parts(p) & in_parts(q)):
            for out1, p2 in moves(p, in_part):
                for out2, q2 in moves(q, in_part):
                    sym = in_part + out1 + out2
                    if is_pad(sym):
                        continue
                    nxt = (p2, q2, diff or out1 != out2)
                    transitions.append((node, sym, nxt))
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)

    def done(s):
        return s == "fin" or s in a.accepting

    accepting = [s for s in seen if s[2] and done(s[0]) and done(s[1])]
    return TrackAutomaton.build(k + 2 * c, a.alphabet, start, accepting, transitions)


def check_functional(r: AutomaticRelation) -> bool:
    return pair_product(r).is_empty


def certify(r: AutomaticRelation) -> AutomaticFunction:
    return AutomaticFunction(relation=r, functional_certificate=check_functional(r))


def compose(r: AutomaticRelation, s: AutomaticRelation) -> AutomaticRelation:
    """(x, z) with some y such that (x, y) in r and (y, z) in s."""
    if not (r.bounded and s.bounded):
        raise UnboundedCompositionError("composition with an unbounded relation is refused")
    if r.coarity != s.arity:
        raise ArityError(f"{r.coarity} outputs cannot feed {s.arity} inputs")
    a, b, c = r.arity, r.coarity, s.coarity
    x = list(range(a))
    y = list(range(a, a + b))
    z = list(range(a + b, a + b + c))
    product_aut = synchronized_product(
        [(r.automaton, x + y), (s.automaton, y + z)], a + b + c
    )
    composed = project(product_aut, x + z)
    return AutomaticRelation(
        automaton=composed,
        bound=r.bound + s.bound,
        arity=a,
        name=f"{s.name}∘{r.name}" if r.name and s.name else "",
    )


def identity_relation(alphabet: Iterable[str]) -> AutomaticFunction:
    letters = sorted(set(alphabet))
    a = TrackAutomaton.build(2, letters, [0], [0], [(0, (ch, ch), 0) for ch in letters])
    rel = AutomaticRelation(automaton=a, bound=0, arity=1, name="identity")
    return AutomaticFunction(relation=rel, functional_certificate=True)


def pair_relation(x: str, y: str, alphabet: Iterable[str]) -> AutomaticFunction:
    """The one-pair relation {(x, y)}."""
    conv = convolve([x, y])
    transitions = [(i, sym, i + 1) for i, sym in enumerate(conv)]
    a = TrackAutomaton.build(2, set(alphabet) | set(x) | set(y), [0], [len(conv)], transitions)
    rel = AutomaticRelation(automaton=a, bound=abs(len(y) - len(x)), arity=1, name=f"{x}->{y}")
    return AutomaticFunction(relation=rel, functional_certificate=True)


def constant_relation(value: str, alphabet: Iterable[str]) -> AutomaticFunction:
    """{(x, value)} for every word x; unbounded since x may be arbitrarily long."""
    letters = sorted(set(alphabet))
    size = len(value)
    transitions = []
    for i, ch in enumerate(value):
        for a in letters:
            transitions.append(((i, False), (a, ch), (i + 1, False)))
        transitions.append(((i, False), (PAD, ch), (i + 1, True)))
        transitions.append(((i, True), (PAD, ch), (i + 1, True)))
    for a in letters:
        transitions.append(((size, False), (a, PAD), (size, False)))
    a = TrackAutomaton.build(
        2, set(letters) | set(value), [(0, False)], [(size, False), (size, True)], transitions
    )
    rel = AutomaticRelation(automaton=a, bound=None, arity=1, name=f"const {value!r}")
    return AutomaticFunction(relation=rel, functional_certificate=True)

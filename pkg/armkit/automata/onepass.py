"""Single-pass rewriters compiled into synchronous automata.

A pass walks over the input once (left to right or right to left), keeps a
finite state, writes at most two characters per input symbol and a short
suffix at the end. The compiled automaton reads input and output in
lock-step, buffering or guessing the characters by which the output runs
ahead of or behind the input.
"""
from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from enum import Enum
from typing import (
    Callable, Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple,
)

from armkit import config
from armkit.automata.automaton import TrackAutomaton
from armkit.automata.convolution import (
    PAD, Symbol, convolve, pads_of, symbols_over, symbols_over_tracks,
)
from armkit.automata.relations import (
    AutomaticFunction, AutomaticPredicate, AutomaticRelation, check_functional,
)
from armkit.errors import OnePassSpecError, ResourceLimitError

logger = logging.getLogger(__name__)

MAX_CHUNK = 2


class Direction(str, Enum):
    LTR = "left-to-right"
    RTL = "right-to-left"


@dataclass(frozen=True, eq=False)
class OnePassSpec:
    direction: Direction
    initial: Hashable
    rewrite: Mapping[Tuple[Hashable, Symbol], Tuple[Hashable, str]]
    flush: Mapping[Hashable, str]
    alphabet: FrozenSet[str]
    output_alphabet: FrozenSet[str]
    arity: int = 1
    bound: int = 0
    name: str = ""

    @classmethod
    def from_step(
        cls,
        step: Callable,
        final: Callable,
        *,
        alphabet: Iterable[str],
        initial: Hashable = 0,
        direction: Direction = Direction.LTR,
        output_alphabet: Optional[Iterable[str]] = None,
        arity: int = 1,
        bound: int = 0,
        name: str = "",
        track_alphabets: Optional[Sequence[Iterable[str]]] = None,
    ) -> "OnePassSpec":
        """Tabulate step(state, symbol) -> (state, out) | None over reachable states.

        Arity-1 steps receive the bare character; wider ones the tuple.
        final(state) returns the flushed suffix, or None when the pass
        may not stop in that state. track_alphabets narrows the symbols
        tabulated to one alphabet per input track.
        """
        sigma = frozenset(alphabet)
        symbols = _symbols(sigma, arity, track_alphabets)
        rewrite: Dict[Tuple[Hashable, Symbol], Tuple[Hashable, str]] = {}
        flush: Dict[Hashable, str] = {}
        seen = {initial}
        queue = deque([initial])
        while queue:
            state = queue.popleft()
            tail = final(state)
            if tail is not None:
                flush[state] = tail
            for sym in symbols:
                res = step(state, sym[0] if arity == 1 else sym)
                if res is None:
                    continue
                nxt, out = res
                rewrite[(state, sym)] = (nxt, out)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
                    if len(seen) > config.STATE_CEILING:
                        raise ResourceLimitError(f"pass {name!r} has too many states")
        outs = frozenset(output_alphabet) if output_alphabet is not None else sigma
        return cls(
            direction=Direction(direction),
            initial=initial,
            rewrite=rewrite,
            flush=flush,
            alphabet=sigma,
            output_alphabet=outs,
            arity=arity,
            bound=bound,
            name=name,
        )

    def interpret(self, inputs) -> Optional[str]:
        """Run the pass directly, without automata."""
        args = [inputs] if isinstance(inputs, str) else list(inputs)
        conv = convolve(args) if any(args) else []
        state = self.initial
        chunks = []
        seq = conv if self.direction == Direction.LTR else list(reversed(conv))
        for sym in seq:
            res = self.rewrite.get((state, tuple(sym)))
            if res is None:
                return None
            state, out = res
            chunks.append(out)
        if state not in self.flush:
            return None
        if self.direction == Direction.LTR:
            return "".join(chunks) + self.flush[state]
        return self.flush[state] + "".join(reversed(chunks))


def _symbols(sigma: FrozenSet[str], arity: int, track_alphabets) -> List[Symbol]:
    if track_alphabets is None:
        return symbols_over(sigma, arity)
    if len(track_alphabets) != arity:
        raise OnePassSpecError(f"{len(track_alphabets)} track alphabets for arity {arity}")
    return symbols_over_tracks(track_alphabets)


@dataclass
class _Pass:
    """Left-to-right nondeterministic view of a pass."""
    starts: List[Tuple[Hashable, str]]
    moves: Dict[Tuple[Hashable, Symbol], List[Tuple[Hashable, str]]]
    finals: Dict[Hashable, str]

    def outgoing(self) -> Dict[Hashable, List[Tuple[Symbol, List[Tuple[Hashable, str]]]]]:
        index = defaultdict(list)
        for (q, sym), choices in self.moves.items():
            index[q].append((sym, choices))
        return index


def _as_ltr(spec: OnePassSpec) -> _Pass:
    if spec.direction == Direction.LTR:
        return _Pass(
            starts=[(spec.initial, "")],
            moves={k: [v] for k, v in spec.rewrite.items()},
            finals=dict(spec.flush),
        )
    # right-to-left: guess the state the backward pass ends in, run the
    # transitions in reverse and require arriving at its initial state
    forward = defaultdict(set)
    for (src, _), (dst, _) in spec.rewrite.items():
        forward[src].add(dst)
    reach = {spec.initial}
    queue = deque(reach)
    while queue:
        node = queue.popleft()
        for nxt in forward.get(node, ()):
            if nxt not in reach:
                reach.add(nxt)
                queue.append(nxt)
    moves: Dict[Tuple[Hashable, Symbol], List[Tuple[Hashable, str]]] = defaultdict(list)
    for (src, sym), (dst, out) in spec.rewrite.items():
        if src in reach:
            moves[(dst, sym)].append((src, out))
    return _Pass(
        starts=[(q, tail) for q, tail in spec.flush.items() if q in reach],
        moves=dict(moves),
        finals={spec.initial: ""},
    )


def _check_delta(p: _Pass, bound: int, name: str) -> None:
    """Output may run ahead of or behind the input by at most `bound`."""
    for _, out in (v for vs in p.moves.values() for v in vs):
        if len(out) > MAX_CHUNK:
            raise OnePassSpecError(f"pass {name!r} writes more than {MAX_CHUNK} characters per symbol")
    index = p.outgoing()
    start = [(q, len(pre)) for q, pre in p.starts]
    seen = set(start)
    queue = deque(start)
    while queue:
        q, d = queue.popleft()
        if abs(d) > bound:
            raise OnePassSpecError(f"pass {name!r} drifts {d} characters from its input (bound {bound})")
        if q in p.finals and abs(d + len(p.finals[q])) > bound:
            raise OnePassSpecError(f"pass {name!r} changes the length by more than {bound}")
        for _, choices in index.get(q, ()):
            for nxt, out in choices:
                node = (nxt, d + len(out) - 1)
                if node not in seen:
                    seen.add(node)
                    queue.append(node)


_EMPTY = ("+", "")


def _feed(buf, produced: str):
    sign, chars = buf
    if sign == "+":
        return ("+", chars + produced)
    if len(produced) <= len(chars):
        if chars[: len(produced)] != produced:
            return None
        rest = chars[len(produced):]
        return ("-", rest) if rest else _EMPTY
    if produced[: len(chars)] != chars:
        return None
    return ("+", produced[len(chars):])


def _emit(buf, outs: Sequence[str]):
    sign, chars = buf
    if sign == "+" and chars:
        return [(chars[0], ("+", chars[1:]))]
    owed = chars if sign == "-" else ""
    return [(o, ("-", owed + o)) for o in outs]


def _synchronize(p: _Pass, arity: int, alphabet, outs, name: str) -> TrackAutomaton:
    index = p.outgoing()
    out_letters = sorted(outs)
    in_pad = (PAD,) * arity
    starts = [("B", q, ("+", pre), frozenset()) for q, pre in p.starts]
    seen = set(starts)
    queue = deque(starts)
    transitions = []

    def push(src, sym, dst):
        transitions.append((src, sym, dst))
        if dst not in seen:
            seen.add(dst)
            queue.append(dst)
            if len(seen) > config.STATE_CEILING:
                raise ResourceLimitError(f"pass {name!r} compiles to too many states")

    while queue:
        node = queue.popleft()
        phase = node[0]
        if phase == "D":
            _, buf = node
            if buf[0] == "+" and buf[1]:
                push(node, in_pad + (buf[1][0],), ("D", ("+", buf[1][1:])))
            continue
        _, q, buf, padded = node
        for sym, choices in index.get(q, ()):
            pads = pads_of(sym)
            if not padded <= pads:
                continue
            for nxt, out in choices:
                fed = _feed(buf, out)
                if fed is None:
                    continue
                behind = fed[0] == "-" or fed == _EMPTY
                if phase == "B":
                    for o, rest in _emit(fed, out_letters):
                        push(node, sym + (o,), ("B", nxt, rest, pads))
                if behind:
                    push(node, sym + (PAD,), ("O", nxt, fed, pads))
        if phase == "B" and q in p.finals:
            fed = _feed(buf, p.finals[q])
            if fed is not None and fed[0] == "+" and fed[1]:
                push(node, in_pad + (fed[1][0],), ("D", ("+", fed[1][1:])))

    def accepting(node) -> bool:
        if node[0] == "D":
            return node[1] == _EMPTY
        _, q, buf, _ = node
        return q in p.finals and _feed(buf, p.finals[q]) == _EMPTY

    aut = TrackAutomaton.build(
        arity + 1,
        set(alphabet) | set(outs),
        starts,
        [n for n in seen if accepting(n)],
        transitions,
    )
    logger.debug("pass %s: %d states, %d transitions", name, len(aut.states), len(aut.transitions))
    return aut


def build_onepass(spec: OnePassSpec) -> AutomaticFunction:
    p = _as_ltr(spec)
    _check_delta(p, spec.bound, spec.name)
    aut = _synchronize(p, spec.arity, spec.alphabet, spec.output_alphabet, spec.name)
    relation = AutomaticRelation(automaton=aut, bound=spec.bound, arity=spec.arity, name=spec.name)
    if not check_functional(relation):
        raise OnePassSpecError(f"pass {spec.name!r} is not functional")
    return AutomaticFunction(relation=relation, functional_certificate=True)


def build_nondet_pass(
    step: Callable,
    final: Callable,
    *,
    alphabet: Iterable[str],
    initial: Hashable = 0,
    output_alphabet: Optional[Iterable[str]] = None,
    arity: int = 1,
    bound: int = 0,
    name: str = "",
    track_alphabets: Optional[Sequence[Iterable[str]]] = None,
) -> AutomaticRelation:
    """Left-to-right pass whose step returns several (state, out) choices."""
    sigma = frozenset(alphabet)
    outs = frozenset(output_alphabet) if output_alphabet is not None else sigma
    symbols = _symbols(sigma, arity, track_alphabets)
    moves: Dict[Tuple[Hashable, Symbol], List[Tuple[Hashable, str]]] = {}
    finals: Dict[Hashable, str] = {}
    seen = {initial}
    queue = deque([initial])
    while queue:
        state = queue.popleft()
        tail = final(state)
        if tail is not None:
            finals[state] = tail
        for sym in symbols:
            choices = list(step(state, sym[0] if arity == 1 else sym) or ())
            if choices:
                moves[(state, sym)] = choices
            for nxt, _ in choices:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    p = _Pass(starts=[(initial, "")], moves=moves, finals=finals)
    _check_delta(p, bound, name)
    aut = _synchronize(p, arity, sigma, outs, name)
    return AutomaticRelation(automaton=aut, bound=bound, arity=arity, name=name)


def build_predicate(
    step: Callable,
    accept: Callable,
    *,
    alphabet: Iterable[str],
    initial: Hashable = 0,
    arity: int = 1,
    name: str = "",
    track_alphabets: Optional[Sequence[Iterable[str]]] = None,
) -> AutomaticPredicate:
    """Deterministic scanner step(state, symbol) -> state | None."""
    sigma = frozenset(alphabet)
    symbols = _symbols(sigma, arity, track_alphabets)
    start = (initial, frozenset())
    seen = {start}
    queue = deque([start])
    transitions = []
    memo: Dict[Tuple[Hashable, Symbol], Hashable] = {}
    while queue:
        node = queue.popleft()
        state, padded = node
        for sym in symbols:
            pads = pads_of(sym)
            if not padded <= pads:
                continue
            key = (state, sym)
            if key not in memo:
                memo[key] = step(state, sym[0] if arity == 1 else sym)
            nxt = memo[key]
            if nxt is None:
                continue
            dst = (nxt, pads)
            transitions.append((node, sym, dst))
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
                if len(seen) > config.STATE_CEILING:
                    raise ResourceLimitError(f"predicate {name!r} has too many states")
    aut = TrackAutomaton.build(
        arity, sigma, [start], [n for n in seen if accept(n[0])], transitions
    )
    return AutomaticPredicate(automaton=aut, name=name)


# ---------- passes over large alphabets ----------

class DeferredAutomaton:
    """A pass automaton built only when something asks for its states.

    Track count and alphabet are known up front; any other attribute
    materializes the automaton, subject to ARM_STATE_CEILING.
    """

    def __init__(self, track_count: int, alphabet: Iterable[str], build: Callable[[], TrackAutomaton],
                 name: str = ""):
        self.track_count = track_count
        self.alphabet = frozenset(alphabet)
        self.name = name
        self._build = build
        self._built: Optional[TrackAutomaton] = None

    @property
    def materialized(self) -> bool:
        return self._built is not None

    def materialize(self) -> TrackAutomaton:
        if self._built is None:
            logger.info("materializing pass %s over %d letters", self.name, len(self.alphabet))
            self._built = self._build()
        return self._built

    def __getattr__(self, attr):
        if attr.startswith("_"):
            raise AttributeError(attr)
        return getattr(self.materialize(), attr)

    def __repr__(self) -> str:
        return f"DeferredAutomaton(tracks={self.track_count}, letters={len(self.alphabet)}, name={self.name!r})"


class _Direct:
    """Walks a step function over the convolution, memoized per (state, symbol)."""

    def __init__(self, step: Callable, initial: Hashable, track_alphabets: Sequence[Iterable[str]]):
        self.step = step
        self.initial = initial
        self.tracks = [frozenset(t) for t in track_alphabets]
        self.memo: Dict[Tuple[Hashable, Symbol], object] = {}

    def symbols(self, args: Sequence[str]) -> Optional[List[Symbol]]:
        if len(args) != len(self.tracks):
            raise OnePassSpecError(f"{len(args)} registers for {len(self.tracks)} tracks")
        conv = convolve(list(args)) if any(args) else []
        for sym in conv:
            if any(ch != PAD and ch not in alpha for ch, alpha in zip(sym, self.tracks)):
                return None
        return conv

    def move(self, state, sym: Symbol):
        key = (state, sym)
        if key not in self.memo:
            self.memo[key] = self.step(state, sym[0] if len(sym) == 1 else sym)
        return self.memo[key]


class DirectPass(_Direct):
    """The output of a deterministic pass, computed without its automaton."""

    def __init__(self, step, final, *, initial, direction: Direction, track_alphabets, output_alphabet):
        super().__init__(step, initial, track_alphabets)
        self.final = final
        self.direction = Direction(direction)
        self.outs = frozenset(output_alphabet)

    def __call__(self, args: Sequence[str]) -> Optional[str]:
        seq = self.symbols(args)
        if seq is None:
            return None
        if self.direction == Direction.RTL:
            seq = seq[::-1]
        state = self.initial
        chunks = []
        for sym in seq:
            res = self.move(state, sym)
            if res is None:
                return None
            state, out = res
            chunks.append(out)
        tail = self.final(state)
        if tail is None:
            return None
        if self.direction == Direction.LTR:
            out = "".join(chunks) + tail
        else:
            out = tail + "".join(reversed(chunks))
        return out if set(out) <= self.outs else None


class DirectScan(_Direct):
    """Membership for a deterministic scanner, computed without its automaton."""

    def __init__(self, step, accept, *, initial, track_alphabets):
        super().__init__(step, initial, track_alphabets)
        self.accept = accept

    def __call__(self, args: Sequence[str]) -> bool:
        seq = self.symbols(args)
        if seq is None:
            return False
        state = self.initial
        for sym in seq:
            state = self.move(state, sym)
            if state is None:
                return False
        return bool(self.accept(state))


def defer_onepass(
    step: Callable,
    final: Callable,
    *,
    initial: Hashable,
    direction: Direction,
    output_alphabet: Iterable[str],
    bound: int,
    name: str,
    track_alphabets: Sequence[Iterable[str]],
) -> AutomaticFunction:
    """A one-pass function whose automaton is only built on demand.

    A deterministic step table is functional by construction, so the
    certificate needs no pair product. The declared bound is checked by
    the interpreter on every application.
    """
    tracks = [frozenset(t) for t in track_alphabets]
    outs = frozenset(output_alphabet)
    sigma = frozenset().union(*tracks) | outs

    def build() -> TrackAutomaton:
        return build_onepass(OnePassSpec.from_step(
            step, final, alphabet=sigma, initial=initial, direction=direction,
            output_alphabet=outs, arity=len(tracks), bound=bound, name=name,
            track_alphabets=tracks,
        )).automaton

    relation = AutomaticRelation(
        automaton=DeferredAutomaton(len(tracks) + 1, sigma, build, name),
        bound=bound,
        arity=len(tracks),
        name=name,
        direct=DirectPass(step, final, initial=initial, direction=direction,
                          track_alphabets=tracks, output_alphabet=outs),
    )
    return AutomaticFunction(relation=relation, functional_certificate=True)


def defer_predicate(
    step: Callable,
    accept: Callable,
    *,
    initial: Hashable,
    name: str,
    track_alphabets: Sequence[Iterable[str]],
) -> AutomaticPredicate:
    tracks = [frozenset(t) for t in track_alphabets]
    sigma = frozenset().union(*tracks)

    def build() -> TrackAutomaton:
        return build_predicate(step, accept, alphabet=sigma, initial=initial, arity=len(tracks),
                               name=name, track_alphabets=tracks).automaton

    return AutomaticPredicate(
        automaton=DeferredAutomaton(len(tracks), sigma, build, name),
        name=name,
        direct=DirectScan(step, accept, initial=initial, track_alphabets=tracks),
    )

"""Closure constructions on track automata: boolean operations, products,
projection and minimization."""
from __future__ import annotations

import logging
from collections import defaultdict, deque
from enum import Enum
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from armkit import config
from armkit.automata.automaton import State, TrackAutomaton
from armkit.automata.convolution import PAD, Symbol, is_pad, pads_of, symbols_over
from armkit.errors import ArityError, ResourceLimitError

logger = logging.getLogger(__name__)

FIN = "__fin__"


class CombineMode(str, Enum):
    UNION = "union"
    INTERSECT = "intersect"
    COMPLEMENT = "complement"


def wellformed_automaton(track_count: int, alphabet: Iterable[str]) -> TrackAutomaton:
    """Accepts every well-formed convolution of `track_count` words."""
    initial = frozenset()
    transitions = []
    seen = {initial}
    queue = deque([initial])
    symbols = symbols_over(alphabet, track_count)
    while queue:
        padded = queue.popleft()
        for sym in symbols:
            pads = pads_of(sym)
            if padded <= pads:
                transitions.append((padded, sym, pads))
                if pads not in seen:
                    seen.add(pads)
                    queue.append(pads)
    return TrackAutomaton.build(track_count, alphabet, [initial], seen, transitions)


def universal(alphabet: Iterable[str]) -> TrackAutomaton:
    """Single-track Σ*."""
    return wellformed_automaton(1, alphabet)


Component = Tuple[TrackAutomaton, Sequence[int]]


def synchronized_product(
    components: Sequence[Component],
    track_count: int,
    alphabet: Optional[Iterable[str]] = None,
) -> TrackAutomaton:
    """Intersection of the cylinders of each component over `track_count` tracks.

    Each component reads the listed tracks. Once a component accepts it may
    finish, after which its tracks must stay padded. Tracks read by no
    component are unconstrained words over the alphabet.
    """
    sigma = set(alphabet or ())
    for aut, tracks in components:
        sigma |= aut.alphabet
        if len(tracks) != aut.track_count:
            raise ArityError("component track list does not match its automaton")
        for t in tracks:
            if not 0 <= t < track_count:
                raise ArityError(f"track {t} out of range")
    covered = {t for _, tracks in components for t in tracks}
    comps: List[Component] = list(components)
    free = [t for t in range(track_count) if t not in covered]
    if free:
        comps.append((wellformed_automaton(len(free), sigma), free))

    def options(aut: TrackAutomaton, state, width: int):
        pad_part = (PAD,) * width
        if state == FIN:
            return [(pad_part, FIN)]
        opts = list(aut.outgoing.get(state, ()))
        if state in aut.accepting:
            opts.append((pad_part, FIN))
        return opts

    def joins(state: tuple):
        results = []
        assign: List[Optional[str]] = [None] * track_count

        def rec(i: int, nxt: list):
            if i == len(comps):
                sym = tuple(assign)
                if not is_pad(sym):
                    results.append((sym, tuple(nxt)))
                return
            aut, tracks = comps[i]
            for part, dst in options(aut, state[i], len(tracks)):
                saved = []
                ok = True
                for t, ch in zip(tracks, part):
                    if assign[t] is None:
                        assign[t] = ch
                        saved.append(t)
                    elif assign[t] != ch:
                        ok = False
                        break
                if ok:
                    nxt.append(dst)
                    rec(i + 1, nxt)
                    nxt.pop()
                for t in saved:
                    assign[t] = None

        rec(0, [])
        return results

    def accepting(state: tuple) -> bool:
        return all(s == FIN or s in aut.accepting for s, (aut, _) in zip(state, comps))

    starts = [()]
    for aut, _ in comps:
        starts = [s + (q,) for s in starts for q in sorted(aut.initial, key=repr)]
    seen = set(starts)
    queue = deque(starts)
    transitions = []
    while queue:
        state = queue.popleft()
        for sym, dst in joins(state):
            transitions.append((state, sym, dst))
            if dst not in seen:
                seen.add(dst)
                queue.append(dst)
                if len(seen) > config.STATE_CEILING:
                    raise ResourceLimitError(
                        f"product exceeds {config.STATE_CEILING} states"
                    )
    logger.debug("product of %d components: %d states", len(comps), len(seen))
    return TrackAutomaton.build(
        track_count, sigma, starts, [s for s in seen if accepting(s)], transitions
    )


def cylindrify(a: TrackAutomaton, tracks: Sequence[int], track_count: int) -> TrackAutomaton:
    return synchronized_product([(a, tracks)], track_count, a.alphabet)


def determinize(a: TrackAutomaton, symbols: Optional[Iterable[Symbol]] = None) -> TrackAutomaton:
    """Subset construction. With an explicit symbol set the result is complete
    (the empty subset becomes a sink) before trimming."""
    alphabet_symbols = sorted(set(symbols) if symbols is not None else a.symbols)
    start = frozenset(a.initial)
    seen = {start}
    queue = deque([start])
    transitions = []
    while queue:
        subset = queue.popleft()
        for sym in alphabet_symbols:
            nxt = set()
            for state in subset:
                nxt.update(a.delta.get((state, sym), ()))
            if not nxt and symbols is None:
                continue
            target = frozenset(nxt)
            transitions.append((subset, sym, target))
            if target not in seen:
                seen.add(target)
                queue.append(target)
                if len(seen) > config.STATE_CEILING:
                    raise ResourceLimitError(
                        f"determinization exceeds {config.STATE_CEILING} states"
                    )
    accepting = [s for s in seen if s & a.accepting]
    return _built_raw(a.track_count, a.alphabet, [start], accepting, transitions, seen)


def _built_raw(track_count, alphabet, initial, accepting, transitions, states):
    """Like TrackAutomaton.build but without trimming; complement needs the sink."""
    from armkit.automata.automaton import _relabel

    init, acc, trans, live = _relabel(set(initial), set(accepting), set(transitions), set(states))
    return TrackAutomaton(
        track_count=track_count,
        alphabet=frozenset(alphabet),
        states=frozenset(live),
        initial=frozenset(init),
        accepting=frozenset(acc),
        transitions=frozenset(trans),
        deterministic=True,
    )


def minimize(a: TrackAutomaton) -> TrackAutomaton:
    """Moore partition refinement on a deterministic automaton."""
    if not a.deterministic:
        a = determinize(a)
    if a.is_empty:
        return TrackAutomaton.build(a.track_count, a.alphabet, [], [], [])
    block = {s: (s in a.accepting) for s in a.states}
    count = len(set(block.values()))
    while True:
        signature = {}
        for s in a.states:
            moves = tuple(sorted((sym, block[d]) for sym, d in a.outgoing.get(s, ())))
            signature[s] = (block[s], moves)
        names: Dict[Hashable, int] = {}
        new_block = {}
        for s in sorted(a.states, key=lambda x: repr(signature[x])):
            new_block[s] = names.setdefault(signature[s], len(names))
        block = new_block
        if len(names) == count:
            break
        count = len(names)
    transitions = {(block[s], sym, block[d]) for s, sym, d in a.transitions}
    return TrackAutomaton.build(
        a.track_count,
        a.alphabet,
        {block[s] for s in a.initial},
        {block[s] for s in a.accepting},
        transitions,
    )


def determinize_minimize(a: TrackAutomaton) -> TrackAutomaton:
    return minimize(determinize(a))


def boolean_combine(
    a: TrackAutomaton, b: Optional[TrackAutomaton], mode: CombineMode | str
) -> TrackAutomaton:
    mode = CombineMode(mode)
    if mode == CombineMode.COMPLEMENT:
        if b is not None:
            raise ArityError("complement takes a single operand")
        full = symbols_over(a.alphabet, a.track_count)
        dfa = determinize(a, full)
        flipped = _built_raw(
            a.track_count,
            a.alphabet,
            dfa.initial,
            dfa.states - dfa.accepting,
            dfa.transitions,
            dfa.states,
        )
        trimmed = TrackAutomaton.build(
            a.track_count, a.alphabet, flipped.initial, flipped.accepting, flipped.transitions
        )
        return synchronized_product(
            [(trimmed, range(a.track_count)),
             (wellformed_automaton(a.track_count, a.alphabet), range(a.track_count))],
            a.track_count,
        )

    if b is None:
        raise ArityError(f"{mode.value} needs two operands")
    if a.track_count != b.track_count:
        raise ArityError(f"track counts differ: {a.track_count} vs {b.track_count}")
    alphabet = a.alphabet | b.alphabet
    if mode == CombineMode.UNION:
        transitions = [((0, s), sym, (0, d)) for s, sym, d in a.transitions]
        transitions += [((1, s), sym, (1, d)) for s, sym, d in b.transitions]
        return TrackAutomaton.build(
            a.track_count,
            alphabet,
            [(0, s) for s in a.initial] + [(1, s) for s in b.initial],
            [(0, s) for s in a.accepting] + [(1, s) for s in b.accepting],
            transitions,
        )
    tracks = list(range(a.track_count))
    return synchronized_product([(a, tracks), (b, tracks)], a.track_count, alphabet)


def eliminate_silent(
    track_count: int,
    alphabet: Iterable[str],
    initial: Iterable[State],
    accepting: Iterable[State],
    moves: Iterable[Tuple[State, Optional[Symbol], State]],
) -> TrackAutomaton:
    """Build an automaton from moves where a None symbol is a silent move."""
    silent: Dict[State, set] = defaultdict(set)
    solid: Dict[State, list] = defaultdict(list)
    states = set(initial) | set(accepting)
    for src, sym, dst in moves:
        states.update((src, dst))
        if sym is None:
            silent[src].add(dst)
        else:
            solid[src].append((sym, dst))
    acc = set(accepting)
    transitions = []
    new_accepting = []
    for state in states:
        closure = {state}
        queue = deque([state])
        while queue:
            node = queue.popleft()
            for nxt in silent.get(node, ()):
                if nxt not in closure:
                    closure.add(nxt)
                    queue.append(nxt)
        if closure & acc:
            new_accepting.append(state)
        for node in closure:
            for sym, dst in solid.get(node, ()):
                transitions.append((state, sym, dst))
    return TrackAutomaton.build(track_count, alphabet, initial, new_accepting, transitions)


def project(a: TrackAutomaton, keep: Iterable[int]) -> TrackAutomaton:
    """Existentially quantify away every track not in `keep`."""
    kept = sorted(set(keep))
    if not kept:
        raise ArityError("projection must keep at least one track")
    for t in kept:
        if not 0 <= t < a.track_count:
            raise ArityError(f"track {t} out of range")
    moves = []
    for src, sym, dst in a.transitions:
        part = tuple(sym[t] for t in kept)
        moves.append((src, None if is_pad(part) else part, dst))
    return eliminate_silent(len(kept), a.alphabet, a.initial, a.accepting, moves)


def same_language_upto(a: TrackAutomaton, b: TrackAutomaton, length: int) -> bool:
    """Exhaustive comparison on all well-formed convolutions up to `length`."""
    if a.track_count != b.track_count:
        return False
    alphabet = a.alphabet | b.alphabet
    symbols = symbols_over(alphabet, a.track_count)
    frontier: List[Tuple[FrozenSet, FrozenSet, FrozenSet]] = [
        (frozenset(a.initial), frozenset(b.initial), frozenset())
    ]
    seen = set(frontier)
    for _ in range(length + 1):
        nxt = []
        for sa, sb, padded in frontier:
            if bool(sa & a.accepting) != bool(sb & b.accepting):
                return False
            for sym in symbols:
                pads = pads_of(sym)
                if not padded <= pads:
                    continue
                ta = frozenset(d for s in sa for d in a.delta.get((s, sym), ()))
                tb = frozenset(d for s in sb for d in b.delta.get((s, sym), ()))
                key = (ta, tb, pads)
                if key not in seen:
                    seen.add(key)
                    nxt.append(key)
        frontier = nxt
    return True

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from armkit.automata.convolution import PAD, Symbol, convolve, is_pad
from armkit.errors import AlphabetError, ArityError, AutomatonFormatError

logger = logging.getLogger(__name__)

State = Hashable
Transition = Tuple[State, Symbol, State]


@dataclass(frozen=True, eq=False)
class TrackAutomaton:
    """Finite automaton over convolution symbols of `track_count` tracks.

    Always trimmed: every state is reachable from an initial state and can
    reach an accepting one. Use `TrackAutomaton.build` to construct.
    """

    track_count: int
    alphabet: FrozenSet[str]
    states: FrozenSet[State]
    initial: FrozenSet[State]
    accepting: FrozenSet[State]
    transitions: FrozenSet[Transition]
    deterministic: bool

    @classmethod
    def build(
        cls,
        track_count: int,
        alphabet: Iterable[str],
        initial: Iterable[State],
        accepting: Iterable[State],
        transitions: Iterable[Transition],
        relabel: bool = True,
    ) -> "TrackAutomaton":
        if track_count < 1:
            raise ArityError("an automaton needs at least one track")
        sigma = frozenset(alphabet)
        if PAD in sigma:
            raise AlphabetError("'#' is reserved for padding")
        allowed = sigma | {PAD}
        trans = set()
        for src, sym, dst in transitions:
            sym = tuple(sym)
            if len(sym) != track_count:
                raise ArityError(f"symbol {sym} does not have {track_count} entries")
            if is_pad(sym):
                raise AlphabetError("the all-'#' tuple is not a symbol")
            for ch in sym:
                if ch not in allowed:
                    raise AlphabetError(f"character {ch!r} not in track alphabet")
            trans.add((src, sym, dst))

        init = set(initial)
        acc = set(accepting)
        live = _trim(init, acc, trans)
        trans = {(s, a, d) for (s, a, d) in trans if s in live and d in live}
        init &= live
        acc &= live

        if relabel:
            init, acc, trans, live = _relabel(init, acc, trans, live)

        out_degree: Dict[Tuple[State, Symbol], int] = defaultdict(int)
        for src, sym, _ in trans:
            out_degree[(src, sym)] += 1
        deterministic = len(init) <= 1 and all(v == 1 for v in out_degree.values())

        return cls(
            track_count=track_count,
            alphabet=sigma,
            states=frozenset(live),
            initial=frozenset(init),
            accepting=frozenset(acc),
            transitions=frozenset(trans),
            deterministic=deterministic,
        )

    # ---------- indices ----------

    @cached_property
    def outgoing(self) -> Dict[State, List[Tuple[Symbol, State]]]:
        index: Dict[State, List[Tuple[Symbol, State]]] = defaultdict(list)
        for src, sym, dst in sorted(self.transitions, key=repr):
            index[src].append((sym, dst))
        return dict(index)

    @cached_property
    def delta(self) -> Dict[Tuple[State, Symbol], Tuple[State, ...]]:
        index: Dict[Tuple[State, Symbol], List[State]] = defaultdict(list)
        for src, sym, dst in self.transitions:
            index[(src, sym)].append(dst)
        return {k: tuple(v) for k, v in index.items()}

    @cached_property
    def symbols(self) -> FrozenSet[Symbol]:
        return frozenset(sym for _, sym, _ in self.transitions)

    # ---------- queries ----------

    @property
    def is_empty(self) -> bool:
        return not self.states

    def accepts(self, word: Sequence[Sequence[str]]) -> bool:
        """Membership of a symbol string (subset simulation)."""
        current = set(self.initial)
        for sym in word:
            sym = tuple(sym)
            nxt = set()
            for state in current:
                nxt.update(self.delta.get((state, sym), ()))
            if not nxt:
                return False
            current = nxt
        return bool(current & self.accepting)

    def accepts_words(self, words: Sequence[str]) -> bool:
        if len(words) != self.track_count:
            raise ArityError(f"expected {self.track_count} words, got {len(words)}")
        return self.accepts(convolve(list(words)))

    def relabel(self) -> "TrackAutomaton":
        return TrackAutomaton.build(
            self.track_count, self.alphabet, self.initial, self.accepting, self.transitions
        )

    def __repr__(self) -> str:
        return (
            f"TrackAutomaton(tracks={self.track_count}, states={len(self.states)}, "
            f"transitions={len(self.transitions)}, deterministic={self.deterministic})"
        )


def _trim(initial: set, accepting: set, transitions: set) -> set:
    forward: Dict[State, set] = defaultdict(set)
    backward: Dict[State, set] = defaultdict(set)
    for src, _, dst in transitions:
        forward[src].add(dst)
        backward[dst].add(src)
    reach = _closure(initial, forward)
    coreach = _closure(accepting, backward)
    return reach & coreach


def _closure(seeds: Iterable[State], edges: Dict[State, set]) -> set:
    seen = set(seeds)
    queue = deque(seen)
    while queue:
        node = queue.popleft()
        for nxt in edges.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def _relabel(initial: set, accepting: set, transitions: set, states: set):
    """Rename states to 0..n-1 in breadth-first order."""
    forward: Dict[State, List[Tuple[Symbol, State]]] = defaultdict(list)
    for src, sym, dst in transitions:
        forward[src].append((sym, dst))
    names: Dict[State, int] = {}
    queue = deque()
    for state in sorted(initial, key=repr):
        names[state] = len(names)
        queue.append(state)
    while queue:
        node = queue.popleft()
        for _, dst in sorted(forward.get(node, ()), key=lambda e: (e[0], repr(e[1]))):
            if dst not in names:
                names[dst] = len(names)
                queue.append(dst)
    for state in sorted(states - set(names), key=repr):
        names[state] = len(names)
    return (
        {names[s] for s in initial},
        {names[s] for s in accepting},
        {(names[s], a, names[d]) for (s, a, d) in transitions},
        set(names.values()),
    )


# ---------- text format ----------

def dump_automaton(a: TrackAutomaton) -> str:
    lines = [f"tracks {a.track_count}", "alphabet " + " ".join(sorted(a.alphabet))]
    for state in sorted(a.states, key=repr):
        flags = []
        if state in a.initial:
            flags.append("initial")
        if state in a.accepting:
            flags.append("accepting")
        lines.append(" ".join([f"state {state}"] + flags))
    for src, sym, dst in sorted(a.transitions, key=repr):
        lines.append(f"trans {src} ({','.join(sym)}) {dst}")
    return "\n".join(lines) + "\n"


def load_automaton(text: str) -> TrackAutomaton:
    tracks: Optional[int] = None
    alphabet: List[str] = []
    states: List[str] = []
    initial: List[str] = []
    accepting: List[str] = []
    transitions: List[Transition] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        parts = rest.split()
        if keyword == "tracks":
            try:
                tracks = int(rest)
            except ValueError:
                raise AutomatonFormatError(f"bad track count {rest!r}", line_no)
        elif keyword == "alphabet":
            for ch in parts:
                if len(ch) != 1 or ch == PAD:
                    raise AutomatonFormatError(f"bad alphabet letter {ch!r}", line_no)
            alphabet.extend(parts)
        elif keyword == "state":
            if not parts:
                raise AutomatonFormatError("state needs a name", line_no)
            name, flags = parts[0], parts[1:]
            for flag in flags:
                if flag not in ("initial", "accepting"):
                    raise AutomatonFormatError(f"unknown state flag {flag!r}", line_no)
            states.append(name)
            if "initial" in flags:
                initial.append(name)
            if "accepting" in flags:
                accepting.append(name)
        elif keyword == "trans":
            if len(parts) != 3 or not (parts[1].startswith("(") and parts[1].endswith(")")):
                raise AutomatonFormatError("expected: trans <from> (<e1>,...) <to>", line_no)
            sym = tuple(parts[1][1:-1].split(","))
            if any(len(ch) != 1 for ch in sym):
                raise AutomatonFormatError(f"bad tuple {parts[1]}", line_no)
            if is_pad(sym):
                raise AutomatonFormatError("the all-'#' tuple is not a symbol", line_no)
            transitions.append((parts[0], sym, parts[2]))
        else:
            raise AutomatonFormatError(f"unknown declaration {keyword!r}", line_no)

    if tracks is None:
        raise AutomatonFormatError("missing 'tracks' declaration")
    declared = set(states)
    for src, sym, dst in transitions:
        for name in (src, dst):
            if name not in declared:
                raise AutomatonFormatError(f"undeclared state {name!r}")
        if len(sym) != tracks:
            raise AutomatonFormatError(f"tuple {sym} does not have {tracks} entries")
    try:
        return TrackAutomaton.build(tracks, alphabet, initial, accepting, transitions, relabel=False)
    except (AlphabetError, ArityError) as e:
        raise AutomatonFormatError(str(e))

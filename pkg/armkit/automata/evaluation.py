"""Running relations forwards: the unique output of a function, or every
output of a bounded relation."""
from __future__ import annotations

import logging
from typing import FrozenSet, List, Optional, Sequence, Tuple, Union

from armkit import config
from armkit.automata.convolution import PAD, Symbol
from armkit.automata.relations import AutomaticFunction, AutomaticRelation
from armkit.errors import ArityError, FanoutOverflowError, UncertifiedFunctionError

logger = logging.getLogger(__name__)

Inputs = Union[str, Sequence[str]]
Output = Union[str, Tuple[str, ...]]


def _normalize(r: AutomaticRelation, inputs: Inputs) -> Tuple[str, ...]:
    args = (inputs,) if isinstance(inputs, str) else tuple(inputs)
    if len(args) != r.arity:
        raise ArityError(f"{r.name or 'relation'} takes {r.arity} inputs, got {len(args)}")
    return args


def _input_parts(r: AutomaticRelation, args: Tuple[str, ...], horizon: int) -> List[Symbol]:
    pad = (PAD,) * r.arity
    width = max((len(a) for a in args), default=0)
    if r.arity == 1:
        word = args[0]
        return [(word[pos],) for pos in range(width)] + [pad] * (horizon - width)
    return [
        tuple(a[pos] if pos < len(a) else PAD for a in args) for pos in range(width)
    ] + [pad] * (horizon - width)


def _forward(r: AutomaticRelation, parts: List[Symbol]) -> List[FrozenSet]:
    """Reachable state sets after each prefix of the input-part sequence."""
    memo = r._memo
    index = r.io_index
    current = frozenset(r.automaton.initial)
    sets = [current]
    for part in parts:
        key = (current, part)
        nxt = memo.get(key)
        if nxt is None:
            nxt = frozenset(dst for s in current for _, dst in index.get((s, part), ()))
            memo[key] = nxt
        current = nxt
        sets.append(current)
        if not current:
            break
    return sets


def _horizon(r: AutomaticRelation, args: Tuple[str, ...], max_length: Optional[int]) -> Tuple[int, int]:
    width = max((len(a) for a in args), default=0)
    if r.bound is not None:
        extra = r.bound
    elif max_length is not None:
        extra = max(0, max_length - width)
    else:
        raise ArityError("unbounded relation needs an explicit max_length")
    return width, width + extra


def _render(r: AutomaticRelation, columns: List[Symbol]) -> Output:
    tracks = ["".join(col[t] for col in columns).rstrip(PAD) for t in range(r.coarity)]
    return tracks[0] if r.coarity == 1 else tuple(tracks)


def eval_function(
    f: AutomaticFunction, inputs: Inputs, max_length: Optional[int] = None
) -> Optional[Output]:
    """The unique output of f on inputs, or None outside its domain.

    max_length caps the search for functions without a length bound.
    """
    if not f.functional_certificate:
        raise UncertifiedFunctionError(f"{f.name or 'function'} has no functional certificate")
    r = f.relation
    args = _normalize(r, inputs)
    if r.direct is not None:
        return r.direct(args)
    width, horizon = _horizon(r, args, max_length)
    parts = _input_parts(r, args, horizon)
    sets = _forward(r, parts)
    accepting = r.automaton.accepting
    for end in range(width, len(sets)):
        hits = sets[end] & accepting
        if hits:
            return _render(r, _walk_back(r, parts, sets, end, min(hits, key=repr)))
    return None


def _walk_back(r: AutomaticRelation, parts, sets, end: int, state) -> List[Symbol]:
    columns: List[Symbol] = []
    rev = r.reverse_index
    for pos in range(end - 1, -1, -1):
        for src, out in rev.get((state, parts[pos]), ()):
            if src in sets[pos]:
                columns.append(out)
                state = src
                break
        else:  # pragma: no cover - forward sets guarantee a predecessor
            raise RuntimeError("broken backward walk")
    columns.reverse()
    return columns


def enumerate_outputs(
    r: AutomaticRelation,
    inputs: Inputs,
    cap: Optional[int] = None,
    max_length: Optional[int] = None,
) -> List[Output]:
    """Every output related to inputs, sorted; at most `cap` of them."""
    cap = cap if cap is not None else config.FANOUT_CAP
    args = _normalize(r, inputs)
    if r.direct is not None:
        out = r.direct(args)
        return [] if out is None else [out]
    width, horizon = _horizon(r, args, max_length)
    parts = _input_parts(r, args, horizon)
    sets = _forward(r, parts)
    accepting = r.automaton.accepting
    index = r.io_index

    # states at each position that still reach an accepting end
    ends = {pos: sets[pos] & accepting for pos in range(width, len(sets))}
    alive: List[FrozenSet] = [frozenset()] * len(sets)
    later: FrozenSet = frozenset()
    for pos in range(len(sets) - 1, -1, -1):
        good = set(ends.get(pos, ()))
        if pos < len(sets) - 1 and later:
            for s in sets[pos]:
                if any(dst in later for _, dst in index.get((s, parts[pos]), ())):
                    good.add(s)
        alive[pos] = frozenset(good)
        later = alive[pos]

    results = set()
    frontier = {s: {()} for s in alive[0]}
    for pos in range(len(sets)):
        for s in ends.get(pos, ()):
            for prefix in frontier.get(s, ()):
                results.add(_render(r, list(prefix)))
        if len(results) > cap:
            raise FanoutOverflowError(cap, f"{r.name or 'relation'} has more than {cap} outputs")
        if pos == len(sets) - 1:
            break
        nxt: dict = {}
        for s, prefixes in frontier.items():
            for out, dst in index.get((s, parts[pos]), ()):
                if dst in alive[pos + 1]:
                    bucket = nxt.setdefault(dst, set())
                    for prefix in prefixes:
                        bucket.add(prefix + (out,))
        if sum(len(v) for v in nxt.values()) > cap * max(1, len(nxt)):
            raise FanoutOverflowError(cap, f"{r.name or 'relation'} has more than {cap} outputs")
        frontier = nxt
    return sorted(results)

"""Shorthand for the one-pass operations the library programs are built from."""
from functools import wraps
from typing import Callable, Hashable, Iterable, Optional, Sequence

from armkit import config
from armkit.automata.convolution import PAD
from armkit.automata.onepass import (
    Direction, OnePassSpec, build_nondet_pass, build_onepass, build_predicate, defer_onepass, defer_predicate,
)
from armkit.automata.relations import (
    AutomaticFunction, AutomaticPredicate, AutomaticRelation, certify,
)
from armkit.errors import OnePassSpecError

LTR = Direction.LTR
RTL = Direction.RTL


def aligned(step: Callable) -> Callable:
    """Undefined wherever one track is already exhausted."""
    @wraps(step)
    def guarded(state, sym):
        if isinstance(sym, tuple) and PAD in sym:
            return None
        return step(state, sym)
    return guarded


def _union(tracks: Sequence[Iterable[str]], extra: Iterable[str] = ()) -> set:
    out = set(extra)
    for track in tracks:
        out |= set(track)
    return out


def rewrite(
    step: Callable,
    tracks: Sequence[Iterable[str]],
    out: Iterable[str],
    *,
    name: str,
    direction: Direction = LTR,
    initial: Hashable = None,
    final: Optional[Callable] = None,
    bound: int = 0,
    ragged: bool = False,
) -> AutomaticFunction:
    """One-pass function over len(tracks) registers.

    The registers must be equally long unless `ragged`, in which case
    step also sees the padding character of the exhausted ones. Over more
    than ARM_EAGER_ALPHABET letters the automaton is built on demand only.
    """
    tracks = [frozenset(t) for t in tracks]
    if len(_union(tracks, out)) > config.EAGER_ALPHABET:
        return defer_onepass(
            step if ragged else aligned(step),
            final or (lambda state: ""),
            initial=initial,
            direction=direction,
            output_alphabet=out,
            bound=bound,
            name=name,
            track_alphabets=tracks,
        )
    return build_onepass(OnePassSpec.from_step(
        step if ragged else aligned(step),
        final or (lambda state: ""),
        alphabet=_union(tracks, out),
        initial=initial,
        direction=direction,
        output_alphabet=frozenset(out),
        arity=len(tracks),
        bound=bound,
        name=name,
        track_alphabets=tracks,
    ))


def guess(
    step: Callable,
    tracks: Sequence[Iterable[str]],
    out: Iterable[str],
    *,
    name: str,
    initial: Hashable = None,
    final: Optional[Callable] = None,
    bound: int = 0,
    ragged: bool = False,
) -> AutomaticRelation:
    """Left-to-right pass with several (state, out) choices per symbol."""
    tracks = [frozenset(t) for t in tracks]

    def choices(state, sym):
        if not ragged and isinstance(sym, tuple) and PAD in sym:
            return ()
        return step(state, sym)

    return build_nondet_pass(
        choices,
        final or (lambda state: ""),
        alphabet=_union(tracks, out),
        initial=initial,
        output_alphabet=frozenset(out),
        arity=len(tracks),
        bound=bound,
        name=name,
        track_alphabets=tracks,
    )


def scan(
    step: Callable,
    accept: Callable,
    tracks: Sequence[Iterable[str]],
    *,
    name: str,
    initial: Hashable = 0,
    ragged: bool = False,
) -> AutomaticPredicate:
    """Deterministic left-to-right predicate; step returning None rejects."""
    tracks = [frozenset(t) for t in tracks]
    if len(_union(tracks)) > config.EAGER_ALPHABET:
        return defer_predicate(step if ragged else aligned(step), accept, initial=initial, name=name,
                               track_alphabets=tracks)
    return build_predicate(
        step if ragged else aligned(step),
        accept,
        alphabet=_union(tracks),
        initial=initial,
        arity=len(tracks),
        name=name,
        track_alphabets=tracks,
    )


def absent(marks: str, alphabet: Iterable[str], name: str) -> AutomaticPredicate:
    """Holds when no character of `marks` occurs."""
    return scan(lambda s, ch: None if ch in marks else s, lambda s: True, [alphabet], name=name)


def present(marks: str, alphabet: Iterable[str], name: str) -> AutomaticPredicate:
    return scan(lambda seen, ch: seen or ch in marks, bool, [alphabet], name=name, initial=False)


def settled(step: Callable, tracks: Sequence[Iterable[str]], out: Iterable[str], **kwargs) -> AutomaticFunction:
    """A guessing pass whose choices are all refuted but one, certified functional.

    Lets a left-to-right pass use a value that only appears later on
    another track: guess it up front and check it when it shows up.
    """
    fn = certify(guess(step, tracks, out, **kwargs))
    if not fn.functional_certificate:
        raise OnePassSpecError(f"pass {kwargs.get('name', '')!r} is not functional")
    return fn

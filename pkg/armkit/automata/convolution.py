from __future__ import annotations

from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

from armkit.errors import AlphabetError, MalformedConvolutionError

PAD = "#"

Symbol = Tuple[str, ...]


def is_pad(sym: Sequence[str]) -> bool:
    """True for the all-'#' tuple (never a valid symbol)."""
    return all(c == PAD for c in sym)


def pads_of(sym: Sequence[str]) -> frozenset:
    return frozenset(i for i, c in enumerate(sym) if c == PAD)


def convolve(words: Sequence[str], alphabet: Optional[Iterable[str]] = None) -> List[Symbol]:
    """Pair words symbol by symbol, padding the shorter ones with '#'."""
    if not words:
        raise ValueError("convolve needs at least one word")
    allowed = frozenset(alphabet) if alphabet is not None else None
    for word in words:
        for ch in word:
            if ch == PAD or (allowed is not None and ch not in allowed):
                raise AlphabetError(f"character {ch!r} not in track alphabet")
    width = max(len(w) for w in words)
    return [
        tuple(w[i] if i < len(w) else PAD for w in words)
        for i in range(width)
    ]


def deconvolve(conv: Sequence[Sequence[str]], tracks: Optional[int] = None) -> List[str]:
    """Inverse of convolve; '#' may only appear as a trailing run per track."""
    if not conv:
        return [""] * (tracks or 1)
    k = len(conv[0])
    if tracks is not None and tracks != k:
        raise MalformedConvolutionError(f"expected {tracks} tracks, got {k}")
    out: List[List[str]] = [[] for _ in range(k)]
    ended = [False] * k
    for pos, sym in enumerate(conv):
        if len(sym) != k:
            raise MalformedConvolutionError(f"ragged symbol at position {pos}")
        if is_pad(sym):
            raise MalformedConvolutionError(f"all-pad symbol at position {pos}")
        for t, ch in enumerate(sym):
            if ch == PAD:
                ended[t] = True
            elif ended[t]:
                raise MalformedConvolutionError(
                    f"track {t + 1} resumes after padding at position {pos}"
                )
            else:
                out[t].append(ch)
    return ["".join(chars) for chars in out]


def symbols_over(alphabet: Iterable[str], k: int) -> List[Symbol]:
    """Every k-tuple over alphabet plus '#', except the all-'#' one."""
    letters = sorted(set(alphabet)) + [PAD]
    return [sym for sym in product(letters, repeat=k) if not is_pad(sym)]


def symbols_over_tracks(alphabets: Sequence[Iterable[str]]) -> List[Symbol]:
    """Like symbols_over, with its own alphabet per track."""
    letters = [sorted(set(a)) + [PAD] for a in alphabets]
    return [sym for sym in product(*letters) if not is_pad(sym)]

"""Random instance generators by id, for profiling sweeps and verification."""
import random
from dataclasses import dataclass
from math import comb
from typing import Any, Callable, Dict, List, Optional, Tuple

from armkit.errors import GenerationError
from armkit.programs.encoders import check_coding, encode_3sat, encode_graph, encode_qsat, graph_tape
from armkit.programs.instances import CnfFormula, GraphInstance, QbfInstance


@dataclass(frozen=True)
class Case:
    """One program input plus the structured instance the oracles look at."""
    input: str
    instance: Any = None


Generator = Callable[[int, random.Random], Case]


def zeros(n: int, rng: random.Random) -> Case:
    return Case("0" * n, "0" * n)


def binary_word(n: int, rng: random.Random) -> Case:
    word = "".join(rng.choice("01") for _ in range(n))
    return Case(word, word)


def nonpalindrome(n: int, rng: random.Random) -> Case:
    """Random word of length max(n, 2) whose only differing mirrored pair is the innermost one."""
    n = max(n, 2)
    half = [rng.choice("01") for _ in range(n // 2)]
    middle = [rng.choice("01")] if n % 2 else []
    bits = half + middle + half[::-1]
    i = n // 2 - 1
    bits[n - 1 - i] = "1" if bits[i] == "0" else "0"
    word = "".join(bits)
    return Case(word, word)


def balanced_parens(n: int, rng: random.Random) -> Case:
    """Random balanced word with n // 2 pairs (at least one)."""
    pairs = max(1, n // 2)
    word, opened, closed = [], 0, 0
    while closed < pairs:
        if opened < pairs and (opened == closed or rng.random() < 0.5):
            word.append("(")
            opened += 1
        else:
            word.append(")")
            closed += 1
    text = "".join(word)
    return Case(text, text)


def letters(alphabet: str) -> Generator:
    def gen(n: int, rng: random.Random) -> Case:
        word = "".join(rng.choice(alphabet) for _ in range(max(1, n)))
        return Case(word, word)
    return gen


def an_bn(n: int, rng: random.Random) -> Case:
    half = max(1, n // 2)
    word = "a" * half + "b" * half
    return Case(word, word)


def zeros_ones(n: int, rng: random.Random) -> Case:
    half = n // 2
    word = "0" * half + "1" * half
    return Case(word, word)


def random_digraph(n: int, rng: random.Random, sdag: bool = False) -> GraphInstance:
    n = max(1, n)
    p = min(1.0, 2.0 / n)
    edges = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j and (not sdag or i < j) and rng.random() < p
    ]
    sources = [v for v in range(1, n + 1) if rng.random() < 0.2] or [rng.randint(1, n)]
    return GraphInstance.build(n, edges, sources)


def digraph(n: int, rng: random.Random) -> Case:
    g = random_digraph(n, rng)
    return Case(graph_tape(encode_graph(g)), g)


def sdag(n: int, rng: random.Random) -> Case:
    g = random_digraph(n, rng, sdag=True)
    return Case(graph_tape(encode_graph(g)), g)


def reachable_chain(n: int, rng: random.Random) -> Case:
    """A shuffled path through all n vertices from a single source, plus random extra edges.

    Every vertex is reached and no edge enters the source, so connectivity
    runs exactly n-1 iterations.
    """
    n = max(1, n)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    edges = set(zip(order, order[1:]))
    for _ in range(n):
        i, j = rng.randint(1, n), rng.randint(1, n)
        if i != j and j != order[0]:
            edges.add((i, j))
    g = GraphInstance.build(n, edges, [order[0]])
    return Case(graph_tape(encode_graph(g)), g)


def numbers(width: int) -> Generator:
    def gen(n: int, rng: random.Random) -> Case:
        values = [format(rng.randrange(2 ** width), "b").zfill(width) for _ in range(max(1, n))]
        return Case("|".join(values), values)
    return gen


def random_3sat(k: int, rng: random.Random, clauses: Optional[int] = None) -> CnfFormula:
    """Every variable 1..k occurs; about k/3 + 1 extra clauses on top."""
    k = max(1, k)
    count = clauses or max(1, -(-k // 3) + rng.randint(0, k // 3 + 1))
    names = list(range(1, k + 1))
    rng.shuffle(names)
    while len(names) < 3 * count:
        names.append(rng.randint(1, k))
    lits = [v if rng.random() < 0.5 else -v for v in names]
    return CnfFormula(k=k, clauses=tuple(tuple(lits[i:i + 3]) for i in range(0, 3 * count, 3)))


def three_sat(n: int, rng: random.Random) -> Case:
    f = random_3sat(n, rng)
    return Case(encode_3sat(f), f)


def random_qbf(m: int, rng: random.Random, length: int = 0, universal: bool = True) -> QbfInstance:
    """Random instance meeting the coding constraints, grown until its
    rendering is at least `length` characters or no clause fits any more.

    The first clauses partition the variables, so every name occurs
    (in threes when a length is asked for); later ones have three literals
    where m allows and are kept only while no clause contains another.
    """
    m = max(1, m)
    quantifiers = tuple(rng.choice("EA") if universal else "E" for _ in range(m))
    clauses: List[Tuple[Tuple[int, bool], ...]] = []
    names = list(range(m))
    rng.shuffle(names)
    while names:
        size = min(len(names), 3 if length else rng.randint(1, 3))
        clauses.append(tuple((v, rng.random() < 0.5) for v in sorted(names[:size])))
        names = names[size:]
    q = QbfInstance(quantifiers=quantifiers, clauses=tuple(clauses))
    for _ in range(8 * m + 4 * length):
        if len(encode_qsat(q)) >= length:
            break
        size = 3 if m >= 3 else rng.randint(1, m)
        clause = tuple((v, rng.random() < 0.5) for v in sorted(rng.sample(range(m), size)))
        if _subset_free(q.clauses + (clause,)):
            q = QbfInstance(quantifiers=quantifiers, clauses=q.clauses + (clause,))
    check_coding(q)
    return q


def _subset_free(clauses) -> bool:
    sets = [frozenset(c) for c in clauses]
    return not any(a != b and sets[a] <= sets[b] for a in range(len(sets)) for b in range(len(sets)))


def qsat_variables(length: int) -> int:
    """Fewest variables (at least three) whose three-literal clauses can fill `length` characters.

    Counts half of the C(m, 3) * 8 possible clauses, since random picks
    collide with the partition clauses.
    """
    m = 3
    while True:
        k = max(1, (m - 1).bit_length())
        room = m * (k + 3) + comb(m, 3) * 4 * (3 * (k + 3))
        if room >= length:
            return m
        m += 1


def qsat(n: int, rng: random.Random) -> Case:
    """Clauses added until the coding reaches length n; the variable count grows with n."""
    q = random_qbf(qsat_variables(n), rng, length=n)
    return Case(encode_qsat(q), q)


def small_qsat(n: int, rng: random.Random) -> Case:
    """n variables, a handful of clauses."""
    q = random_qbf(n, rng)
    return Case(encode_qsat(q), q)


def logvars(n: int, rng: random.Random) -> Case:
    """All-existential formula with two or three variables, '|0...0' filling up to length n."""
    q = random_qbf(rng.choice((2, 3)), rng, universal=False)
    text = encode_qsat(q) + "|"
    return Case(text + "0" * max(0, n - len(text)), q)


GENERATORS: Dict[str, Generator] = {
    "zeros": zeros,
    "binary": binary_word,
    "nonpalindrome": nonpalindrome,
    "parens": balanced_parens,
    "parens_noise": letters("()"),
    "ab": letters("ab"),
    "an_bn": an_bn,
    "zeros_ones": zeros_ones,
    "digraph": digraph,
    "sdag": sdag,
    "reachable_chain": reachable_chain,
    "numbers": numbers(4),
    "3sat": three_sat,
    "qsat": qsat,
    "small_qsat": small_qsat,
    "logvars": logvars,
}


def generate(generator_id: str, n: int, seed: int) -> Case:
    gen = GENERATORS.get(generator_id)
    if gen is None:
        raise GenerationError(f"unknown generator {generator_id!r}; expected one of {sorted(GENERATORS)}")
    return gen(n, random.Random(f"{generator_id}:{n}:{seed}"))

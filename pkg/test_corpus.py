#!/usr/bin/env python3
"""
Slow acceptance corpora: oracle equivalence at scale, exhaustive small
instance spaces, single-op agreement and the step-growth laws.
"""
import random
from itertools import combinations, product

import pytest

from armkit.cli.fit import fit_growth
from armkit.core.generators import generate, numbers
from armkit.core.verifier import ENTRIES, VerificationManager
from armkit.machine.parser import parse_program
from armkit.machine.program import MachineKind
from armkit.machine.single_op import compile_to_single_op, constant_step_language, run_single_op
from armkit.machine.vm import run, run_unbounded
from armkit.oracles import oracle_grammar, oracle_logic, oracle_misc
from armkit.programs.encoders import check_coding, encode_3sat, encode_qsat
from armkit.programs.instances import CnfFormula, GreibachGrammar, QbfInstance
from armkit.programs.nondet import SAT_FIXED_STEPS, SAT_ROUND_STEPS, gen_greibach_program
from armkit.programs.nspace import history_witness, zeros_ones_ntm
from armkit.programs.sorting import prog_sort
from armkit.programs.stdlib import an_bn, balanced_parens, load_stdlib, stdlib_ids
from armkit.schemas import GrowthModel, StepProfile, StepSample


def words(alphabet, n):
    return ["".join(letters) for k in range(n + 1) for letters in product(alphabet, repeat=k)]


def exact_profile(points):
    return StepProfile(
        program="exact",
        samples=[StepSample(n=n, steps_med=y, steps_min=y, steps_max=y) for n, y in points],
    )


# ---------- exhaustive small spaces ----------

@pytest.mark.slow
def test_nonpalindrome_every_word_up_to_14():
    p = load_stdlib("nonpalindrome")
    for w in words("01", 14):
        assert run(p, w).accepted == (not oracle_misc("palindrome", w)), w


@pytest.mark.slow
def test_nspace_every_word_up_to_12():
    p = load_stdlib("nspace")
    ntm = zeros_ones_ntm()
    for w in words("01", 12):
        witness = history_witness(ntm, w)
        result = run_unbounded(p, w, guess_budget=0, witnesses=[] if witness is None else [witness])
        assert result.accepted == oracle_misc("zeros_ones", w), w


def small_qbfs(max_m):
    """Every prefix over every subset-free list of one or two clauses naming all variables."""
    for m in range(1, max_m + 1):
        lits = [(v, pos) for v in range(m) for pos in (True, False)]
        kinds = [c for size in range(1, m + 1) for c in combinations(lits, size)
                 if len({v for v, _ in c}) == size]
        for count in (1, 2):
            for clauses in combinations(kinds, count):
                for quantifiers in product("EA", repeat=m):
                    q = QbfInstance(quantifiers=quantifiers, clauses=clauses)
                    try:
                        check_coding(q)
                    except ValueError:
                        break
                    yield q


@pytest.mark.slow
def test_qsat_every_instance_up_to_two_variables():
    p = load_stdlib("qsat")
    instances = list(small_qbfs(2))
    assert len(instances) == 94
    for q in instances:
        expected = oracle_logic("qbf", q)
        for seed in (0, 1):
            assert run(p, encode_qsat(q), seed=seed).accepted == expected, (encode_qsat(q), seed)


# ---------- grammars ----------

def gnf(nonterminals, terminals, rules):
    return GreibachGrammar(nonterminals=nonterminals, terminals=frozenset(terminals), rules=rules, start="S")


GREIBACH_GRAMMARS = [
    an_bn(),
    # w c reverse(w)
    gnf(("S", "A", "B"), "abc", (
        ("S", "a", ("S", "A")), ("S", "b", ("S", "B")), ("S", "c", ()),
        ("A", "a", ()), ("B", "b", ()),
    )),
    # non-empty balanced parentheses
    gnf(("S", "R"), "()", (
        ("S", "(", ("R",)), ("S", "(", ("S", "R")), ("S", "(", ("R", "S")),
        ("S", "(", ("S", "R", "S")), ("R", ")", ()),
    )),
    # as many a's as b's
    gnf(("S", "A", "B"), "ab", (
        ("S", "a", ("B",)), ("S", "b", ("A",)), ("S", "a", ("B", "S")), ("S", "b", ("A", "S")),
        ("A", "a", ()), ("A", "a", ("S",)), ("A", "b", ("A", "A")),
        ("B", "b", ()), ("B", "b", ("S",)), ("B", "a", ("B", "B")),
    )),
    # a^n b^2n
    gnf(("S", "B"), "ab", (
        ("S", "a", ("S", "B", "B")), ("S", "a", ("B", "B")), ("B", "b", ()),
    )),
]


def sample_member(g, rng, max_len):
    """Random leftmost derivation of at most max_len terminals, or None."""
    for _ in range(100):
        word, form = "", [g.start]
        while form and len(word) + len(form) <= max_len:
            _, terminal, tail = rng.choice([r for r in g.rules if r[0] == form[0]])
            word += terminal
            form = list(tail) + form[1:]
        if not form:
            return word
    return None


@pytest.mark.slow
def test_cyk_two_hundred_words_up_to_24():
    p = load_stdlib("cyk")
    g = balanced_parens()
    for i in range(200):
        gen = "parens" if i % 2 else "parens_noise"
        w = generate(gen, 1 + i % 24, i).input
        assert run(p, w).accepted == oracle_grammar("cnf", g, w), w


@pytest.mark.slow
@pytest.mark.parametrize("index", range(len(GREIBACH_GRAMMARS)))
def test_greibach_grammars_forty_words_each(index):
    g = GREIBACH_GRAMMARS[index]
    p = gen_greibach_program(g)
    rng = random.Random(f"greibach:{index}")
    terminals = sorted(g.terminals)
    cases = []
    while len(cases) < 40:
        if len(cases) % 2:
            w = sample_member(g, rng, 24)
        else:
            w = "".join(rng.choice(terminals) for _ in range(rng.randint(1, 24)))
        if w:
            cases.append(w)
    for w in cases:
        assert run(p, w).accepted == oracle_grammar("greibach", g, w), (index, w)


# ---------- verifier corpora ----------

@pytest.mark.slow
@pytest.mark.parametrize("stdlib_id,count,max_size", [
    ("graph", 30, 16),
    ("graph_bfs", 30, 16),
    ("graph_sdag", 30, 16),
    ("sort", 100, 8),
    ("3sat", 200, 10),
])
def test_verifier_corpus(stdlib_id, count, max_size):
    report = VerificationManager().verify(stdlib_id, count=count, max_size=max_size)
    assert report.checked == count
    assert report.ok, report.mismatches


# ---------- single-op form ----------

DARM_IDS = ["boolean_cyk", "cyk", "graph", "graph_bfs", "graph_sdag", "ltwo", "sort"]


@pytest.mark.slow
def test_darm_ids_cover_the_library():
    assert DARM_IDS == [i for i in stdlib_ids() if load_stdlib(i).kind == MachineKind.DARM]


@pytest.mark.slow
@pytest.mark.parametrize("stdlib_id", DARM_IDS)
def test_single_op_agrees_on_fifty_inputs(stdlib_id):
    p = load_stdlib(stdlib_id)
    g = compile_to_single_op(p)
    for i in range(50):
        word = generate(ENTRIES[stdlib_id].generator, 1 + i % 8, i).input
        direct, single = run(p, word), run_single_op(g, p, word)
        assert (single.outcome, single.det_steps, single.output) == \
            (direct.outcome, direct.det_steps, direct.output), (stdlib_id, word)


READ_ACCEPT = "alphabet 0 1\n01: read(r1)\n02: halt_accept"
ONLY_EMPTY = """\
alphabet 0 1
use is_empty = builtin(ltwo.is_empty)
01: read(r1)
02: if is_empty(r1) then goto(04)
03: halt_reject
04: halt_accept
"""
ODD_LENGTH = """\
alphabet 0 1
input 0
use is_odd = builtin(ltwo.is_odd)
01: read(r1)
02: if is_odd(r1) then goto(04)
03: halt_reject
04: halt_accept
"""
IS_ONE = """\
alphabet 0 1
input 0
use is_one = builtin(ltwo.is_one)
01: read(r1)
02: if is_one(r1) then goto(04)
03: halt_reject
04: halt_accept
"""
ODD_COPY = """\
alphabet 0 1
input 0
use is_odd = builtin(ltwo.is_odd)
01: read(r1)
02: r2 <- r1
03: if is_odd(r2) then goto(05)
04: halt_reject
05: halt_accept
"""


@pytest.mark.slow
@pytest.mark.parametrize("make,ks", [
    (lambda: parse_program(READ_ACCEPT), (1, 2)),
    (lambda: parse_program(ONLY_EMPTY), (1, 2, 3)),
    (lambda: parse_program(ODD_LENGTH), (1, 2, 3)),
    (lambda: parse_program(ODD_COPY), (2, 3, 4)),
    (lambda: parse_program(IS_ONE), (1, 2, 3)),
])
def test_constant_step_language_matches_runs_up_to_length_10(make, ks):
    p = make()
    sigma = "".join(sorted(p.input_alphabet))
    runs = {w: run(p, w) for w in words(sigma, 10)}
    for k in ks:
        dfa = constant_step_language(p, k)
        for w, r in runs.items():
            assert dfa.accepts_words([w]) == (r.accepted and r.det_steps <= k + 1), (k, w)


# ---------- growth laws ----------

@pytest.mark.slow
def test_sort_steps_scale_with_count_times_width():
    def steps(count, width):
        case = numbers(width)(count, random.Random(f"sort:{count}:{width}"))
        result = run(prog_sort(width), case.input)
        assert result.output.split("|") == oracle_misc("sorted_merge", case.instance)
        return result.det_steps

    grid = {(n, m): steps(n, m) for n in (4, 8, 16) for m in (4, 8, 16)}
    for m in (4, 8, 16):
        assert fit_growth(exact_profile([(n, grid[(n, m)]) for n in (4, 8, 16)])).model == GrowthModel.LINEAR
    for n in (4, 8, 16):
        assert fit_growth(exact_profile([(m, grid[(n, m)]) for m in (4, 8, 16)])).model == GrowthModel.LINEAR
    # the width-dependent part of the cost is proportional to the count
    extra = {n: grid[(n, 16)] - grid[(n, 8)] for n in (4, 8, 16)}
    assert extra[8] == 2 * extra[4]
    assert extra[16] == 2 * extra[8]


def spread_formula(k):
    """k variables named once each, all literals positive, the last clause filled up with variable 1."""
    names = list(range(1, k + 1))
    names += [1] * (-len(names) % 3)
    return CnfFormula(k=k, clauses=tuple(tuple(names[i:i + 3]) for i in range(0, len(names), 3)))


@pytest.mark.slow
def test_3sat_weak_steps_grow_as_n_over_log_n():
    p = load_stdlib("3sat")
    for k in range(1, 11):
        result = run(p, encode_3sat(spread_formula(k)))
        assert result.weak_steps == SAT_FIXED_STEPS + SAT_ROUND_STEPS * k, k
    # one round per variable, and a length-n input names at most about n / log n variables
    points = []
    for j in (3, 5, 7, 9):
        k = 2 ** j - 1
        points.append((len(encode_3sat(spread_formula(k))), SAT_FIXED_STEPS + SAT_ROUND_STEPS * k))
    assert fit_growth(exact_profile(points)).model == GrowthModel.N_OVER_LOG

#!/usr/bin/env python3
"""
Tests for convolution, automaton combinators and one-pass functions.
"""
import random
from itertools import product

import pytest

from armkit import config
from armkit.automata import (
    AutomaticFunction,
    AutomaticPredicate,
    AutomaticRelation,
    DeferredAutomaton,
    Direction,
    OnePassSpec,
    TrackAutomaton,
    boolean_combine,
    build_nondet_pass,
    build_onepass,
    build_predicate,
    certify,
    check_functional,
    compose,
    constant_relation,
    convolve,
    cylindrify,
    deconvolve,
    determinize_minimize,
    dump_automaton,
    enumerate_outputs,
    eval_function,
    identity_relation,
    load_automaton,
    make_relation,
    pair_relation,
    project,
    same_language_upto,
    symbols_over,
    universal,
    validate_relation,
)
from armkit.errors import (
    AlphabetError,
    ArityError,
    AutomatonFormatError,
    FanoutOverflowError,
    MalformedConvolutionError,
    OnePassSpecError,
    UnboundedCompositionError,
    UncertifiedFunctionError,
)
from armkit.programs.ltwo import divide_by_two
from armkit.programs.passes import rewrite, scan

BITS = ("0", "1")


def words_upto(alphabet, n):
    for length in range(n + 1):
        for letters in product(sorted(alphabet), repeat=length):
            yield "".join(letters)


# ---------- fixture automata ----------

def append_zero():
    return build_onepass(OnePassSpec.from_step(
        lambda s, ch: (s, ch), lambda s: "0", alphabet=BITS, bound=1, name="append0",
    ))


def increment():
    def step(carry, ch):
        if not carry:
            return False, ch
        return (True, "0") if ch == "1" else (False, "1")

    return build_onepass(OnePassSpec.from_step(
        step, lambda carry: "1" if carry else "",
        alphabet=BITS, initial=True, direction=Direction.RTL, bound=1, name="increment",
    ))


def decrement_spec():
    # borrow -> 'done' or 'pend' (a produced leading '0' waits to see whether it is leftmost)
    def step(state, ch):
        if state == "borrow":
            return ("borrow", "1") if ch == "0" else ("pend", "")
        if state == "pend":
            return "done", ch + "0"
        return "done", ch

    def final(state):
        return None if state == "borrow" else ""

    return OnePassSpec.from_step(
        step, final, alphabet=BITS, initial="borrow", direction=Direction.RTL,
        bound=1, name="decrement",
    )


def same_length_relation():
    a = TrackAutomaton.build(2, BITS, [0], [0], [(0, (x, y), 0) for x in BITS for y in BITS])
    return AutomaticRelation(automaton=a, bound=0)


def zeros_relation():
    """{(x, y): y in 0*} with no length constraint."""
    pred = build_predicate(
        lambda s, sym: 0 if sym[1] in ("0", "#") else None,
        lambda s: True, alphabet=BITS, arity=2,
    )
    return pred.automaton


def replace_last():
    def step(state, ch):
        return [(0, ch), (1, "0"), (1, "1")] if state == 0 else []

    return build_nondet_pass(
        step, lambda s: "" if s == 1 else None, alphabet=("x", "0", "1"), name="replace_last",
    )


# ---------- convolution ----------

def test_convolve_examples():
    assert convolve(["ab", "a"]) == [("a", "a"), ("b", "#")]
    assert convolve(["x", "x"]) == [("x", "x")]
    assert convolve(["", "01"]) == [("#", "0"), ("#", "1")]


def test_convolve_rejects_foreign_character():
    with pytest.raises(AlphabetError):
        convolve(["012"], alphabet=BITS)


def test_deconvolve_examples():
    assert deconvolve([("a", "a"), ("b", "#")]) == ["ab", "a"]
    assert deconvolve([("x", "x")]) == ["x", "x"]
    with pytest.raises(MalformedConvolutionError):
        deconvolve([("a", "#"), ("#", "b")])


def test_convolution_round_trip():
    rng = random.Random(7)
    for _ in range(200):
        k = rng.randint(1, 4)
        words = ["".join(rng.choice("ab01") for _ in range(rng.randint(0, 32))) for _ in range(k)]
        if not any(words):
            continue
        assert deconvolve(convolve(words)) == words


def test_symbols_skip_all_pad():
    syms = symbols_over(BITS, 2)
    assert ("#", "#") not in syms
    assert len(syms) == 8


# ---------- boolean combinations ----------

def equal_tracks():
    return TrackAutomaton.build(2, BITS, [0], [0], [(0, (c, c), 0) for c in BITS])


def first_track_zeros():
    return build_predicate(
        lambda s, sym: 0 if sym[0] in ("0", "#") else None,
        lambda s: True, alphabet=BITS, arity=2,
    ).automaton


def test_intersect_with_complement_is_empty():
    a = first_track_zeros()
    assert boolean_combine(a, boolean_combine(a, None, "complement"), "intersect").is_empty


def test_union_is_idempotent():
    a = first_track_zeros()
    assert same_language_upto(boolean_combine(a, a, "union"), a, 6)


def test_intersection_accepts_equal_zero_blocks():
    both = boolean_combine(first_track_zeros(), equal_tracks(), "intersect")
    for x in words_upto(BITS, 5):
        for y in words_upto(BITS, 5):
            if not x and not y:
                continue
            expected = x == y and set(x) <= {"0"}
            assert both.accepts_words([x, y]) == expected, (x, y)


def test_complement_is_relative_to_wellformed_words():
    comp = boolean_combine(equal_tracks(), None, "complement")
    assert comp.accepts_words(["01", "0"])
    assert not comp.accepts_words(["01", "01"])
    assert not comp.accepts([("#", "0"), ("0", "#")])


def test_combine_checks_track_counts():
    with pytest.raises(ArityError):
        boolean_combine(equal_tracks(), universal(BITS), "union")


# ---------- determinization / minimization ----------

def test_minimize_keeps_minimal_dfa():
    m = determinize_minimize(equal_tracks())
    assert m.deterministic
    assert len(m.states) == 1


def test_contains_pair_nfa_determinizes():
    symbols = symbols_over(BITS, 2)
    transitions = [("p", s, "p") for s in symbols] + [("q", s, "q") for s in symbols]
    transitions.append(("p", ("0", "0"), "q"))
    nfa = TrackAutomaton.build(2, BITS, ["p"], ["q"], transitions)
    assert not nfa.deterministic
    dfa = determinize_minimize(nfa)
    assert dfa.deterministic
    assert same_language_upto(nfa, dfa, 5)


def test_minimize_merges_equivalent_states():
    # counts symbols mod 4, accepts even counts -> 2 states
    transitions = [(i, ("0",), (i + 1) % 4) for i in range(4)]
    a = TrackAutomaton.build(1, BITS, [0], [0, 2], transitions)
    assert len(determinize_minimize(a).states) == 2


def test_empty_language_minimizes_to_nothing():
    a = TrackAutomaton.build(1, BITS, [0], [], [(0, ("0",), 0)])
    assert a.is_empty
    assert determinize_minimize(a).states == frozenset()


# ---------- cylinders and constants ----------

def test_cylindrify_constrains_only_its_track():
    even = TrackAutomaton.build(
        1, BITS, [0], [0], [(0, (b,), 1) for b in BITS] + [(1, (b,), 0) for b in BITS]
    )
    cyl = cylindrify(even, [1], 2)
    assert cyl.track_count == 2
    assert cyl.accepts_words(["", "01"])
    assert cyl.accepts_words(["10101", "11"])
    assert cyl.accepts_words(["1", ""])
    assert not cyl.accepts_words(["10", "0"])
    assert not cyl.accepts_words(["", "111"])


def test_constant_relation_ignores_its_input():
    c = constant_relation("10", BITS)
    for x in ["", "1", "0110"]:
        assert c.automaton.accepts_words([x, "10"]), x
    assert not c.automaton.accepts_words(["0110", "1"])
    assert not c.automaton.accepts_words(["01", "11"])


# ---------- projection ----------

def test_project_identity_gives_everything():
    ident = identity_relation(BITS).automaton
    assert same_language_upto(project(ident, [0]), universal(BITS), 6)


def test_project_append_zero_to_output_track():
    out = project(append_zero().automaton, [1])
    for w in words_upto(BITS, 7):
        assert out.accepts_words([w]) == w.endswith("0"), w


def test_project_empty_is_empty():
    a = TrackAutomaton.build(2, BITS, [0], [], [])
    assert project(a, [1]).is_empty


def test_project_needs_a_track():
    with pytest.raises(ArityError):
        project(equal_tracks(), [])


# ---------- composition ----------

def test_compose_append_twice():
    twice = certify(compose(append_zero().relation, append_zero().relation))
    assert twice.functional_certificate
    assert twice.bound == 2
    for x in words_upto(BITS, 5):
        assert eval_function(twice, x) == x + "00"


def test_compose_with_identity():
    f = divide_by_two()
    g = certify(compose(f.relation, identity_relation(BITS).relation))
    rng = random.Random(3)
    for _ in range(30):
        x = "".join(rng.choice(BITS) for _ in range(rng.randint(0, 10)))
        assert eval_function(g, x) == eval_function(f, x)


def test_increment_then_decrement_is_identity():
    dec = build_onepass(decrement_spec())
    both = certify(compose(increment().relation, dec.relation))
    assert both.bound == 2
    for value in range(1, 64):
        x = format(value, "b")
        assert eval_function(both, x) == x


def test_compose_refuses_unbounded():
    unbounded = make_relation(zeros_relation())
    assert unbounded.bound is None
    with pytest.raises(UnboundedCompositionError):
        compose(unbounded, identity_relation(BITS).relation)


def test_composed_outputs_go_through_intermediate():
    r = replace_last()
    composed = compose(r, r)
    for x in ("x", "0x", "x1"):
        direct = set(enumerate_outputs(composed, x))
        via = {z for y in enumerate_outputs(r, x) for z in enumerate_outputs(r, y)}
        assert direct == via


# ---------- validation ----------

def test_validate_append_zero():
    report = validate_relation(append_zero().automaton)
    assert report.wellformed
    assert report.bound == 1


def test_validate_unbounded_zeros():
    report = validate_relation(zeros_relation())
    assert report.wellformed
    assert report.bound is None


def test_validate_detects_malformed():
    a = TrackAutomaton.build(
        2, ("0",), [0], [2], [(0, ("#", "0"), 1), (1, ("0", "#"), 2)]
    )
    assert not validate_relation(a).wellformed


def two_tracks(transitions, accepting):
    return TrackAutomaton.build(2, BITS, [0], accepting, transitions)


WELLFORMED_FIXTURES = [
    ("identity", lambda: identity_relation(BITS).automaton, True),
    ("divide_by_two", lambda: divide_by_two().automaton, True),
    ("append0", lambda: append_zero().automaton, True),
    ("increment", lambda: increment().automaton, True),
    ("constant", lambda: constant_relation("10", BITS).automaton, True),
    ("zeros", zeros_relation, True),
    ("input_resumes", lambda: two_tracks([(0, ("#", "0"), 1), (1, ("0", "0"), 2)], [2]), False),
    ("output_resumes", lambda: two_tracks([(0, ("0", "#"), 1), (1, ("1", "1"), 2)], [2]), False),
    ("resumes_in_a_loop", lambda: two_tracks([(0, ("#", "1"), 1), (1, ("1", "1"), 0)], [0]), False),
    ("resumes_late", lambda: two_tracks(
        [(0, ("0", "0"), 1), (1, ("0", "#"), 2), (2, ("1", "#"), 3), (3, ("0", "1"), 4)], [4]), False),
    ("one_bad_branch", lambda: two_tracks(
        [(0, ("0", "0"), 0), (0, ("#", "0"), 1), (1, ("0", "0"), 2)], [0, 2]), False),
    ("middle_track_resumes", lambda: TrackAutomaton.build(
        3, BITS, [0], [2], [(0, ("0", "#", "0"), 1), (1, ("0", "0", "0"), 2)]), False),
]


@pytest.mark.parametrize("name,build,expected", WELLFORMED_FIXTURES)
def test_validate_wellformed_fixtures(name, build, expected):
    assert validate_relation(build()).wellformed == expected, name


BOUND_FIXTURES = [
    ("identity", lambda: identity_relation(BITS).automaton, 0),
    ("divide_by_two", lambda: divide_by_two().automaton, 0),
    ("append0", lambda: append_zero().automaton, 1),
    ("increment", lambda: increment().automaton, 1),
    ("pair", lambda: pair_relation("0110", "1", BITS).automaton, 3),
    ("same_length", lambda: same_length_relation().automaton, 0),
    ("zeros", zeros_relation, None),
]


@pytest.mark.parametrize("name,build,expected", BOUND_FIXTURES)
def test_validate_bound_fixtures(name, build, expected):
    report = validate_relation(build())
    assert report.wellformed
    assert report.bound == expected, name


FUNCTIONAL_FIXTURES = [
    ("identity", lambda: identity_relation(BITS).relation, True),
    ("divide_by_two", lambda: divide_by_two().relation, True),
    ("append0", lambda: append_zero().relation, True),
    ("increment", lambda: increment().relation, True),
    ("decrement", lambda: build_onepass(decrement_spec()).relation, True),
    ("pair", lambda: pair_relation("01", "1", BITS).relation, True),
    ("same_length", same_length_relation, False),
    ("replace_last", replace_last, False),
    ("zeros", lambda: make_relation(zeros_relation()), False),
    ("append_or_keep", lambda: AutomaticRelation(
        boolean_combine(append_zero().automaton, identity_relation(BITS).automaton, "union"), 1), False),
    ("any_bit", lambda: build_nondet_pass(
        lambda s, ch: [(s, "0"), (s, "1")], lambda s: "", alphabet=BITS), False),
    ("twice_replaced", lambda: compose(replace_last(), replace_last()), False),
]


@pytest.mark.parametrize("name,build,expected", FUNCTIONAL_FIXTURES)
def test_check_functional_fixtures(name, build, expected):
    assert check_functional(build()) == expected, name


def test_reported_bound_is_attained():
    rel = append_zero().relation
    assert rel.contains(["01"], ["010"])
    assert abs(len("010") - len("01")) == validate_relation(rel.automaton).bound


# ---------- evaluation ----------

def test_divide_by_two_worked_value():
    assert eval_function(divide_by_two(), "10010110") == "10110111"


def test_identity_on_empty():
    assert eval_function(identity_relation(BITS), "") == ""


def test_divide_twice_leaves_one_zero():
    f = divide_by_two()
    once = eval_function(f, "0000")
    assert once == "0101"
    assert eval_function(f, once).count("0") == 1


def test_eval_requires_certificate():
    raw = AutomaticRelation(automaton=identity_relation(BITS).automaton, bound=0)
    with pytest.raises(UncertifiedFunctionError):
        eval_function(AutomaticFunction(relation=raw), "0")


def test_eval_outside_domain_is_undefined():
    dec = build_onepass(decrement_spec())
    assert eval_function(dec, "000") is None


def test_enumerate_examples():
    assert enumerate_outputs(identity_relation(("a", "b")).relation, "ab") == ["ab"]
    assert enumerate_outputs(replace_last(), "x") == ["0", "1"]


def test_enumerate_cap():
    with pytest.raises(FanoutOverflowError):
        enumerate_outputs(same_length_relation(), "0000", cap=10)
    assert len(enumerate_outputs(same_length_relation(), "0000", cap=16)) == 16


def test_functional_relations_have_single_outputs():
    f = divide_by_two()
    for x in words_upto(BITS, 6):
        outs = enumerate_outputs(f.relation, x)
        assert len(outs) <= 1
        assert outs == [eval_function(f, x)]


# ---------- one-pass construction ----------

def test_increment_pass():
    assert eval_function(increment(), "0111") == "1000"
    assert eval_function(increment(), "111") == "1000"


def test_identity_pass():
    ident = build_onepass(OnePassSpec.from_step(
        lambda s, ch: (s, ch), lambda s: "", alphabet=("a", "b", "c"),
    ))
    rng = random.Random(11)
    for _ in range(100):
        x = "".join(rng.choice("abc") for _ in range(rng.randint(0, 20)))
        assert eval_function(ident, x) == x


def test_pass_matches_direct_interpretation():
    spec = decrement_spec()
    f = build_onepass(spec)
    rng = random.Random(5)
    for _ in range(1000):
        x = "".join(rng.choice(BITS) for _ in range(rng.randint(0, 12)))
        assert eval_function(f, x) == spec.interpret(x), x


def test_pass_drifting_past_bound_is_rejected():
    spec = OnePassSpec.from_step(
        lambda s, ch: (s, ch + ch), lambda s: "", alphabet=BITS, bound=1, name="double",
    )
    with pytest.raises(OnePassSpecError):
        build_onepass(spec)


def test_two_input_pass():
    # bitwise or of two words, the shorter one padded
    def step(s, sym):
        a, b = sym
        return s, "1" if "1" in (a, b) else "0"

    spec = OnePassSpec.from_step(step, lambda s: "", alphabet=BITS, arity=2, name="or")
    f = build_onepass(spec)
    assert eval_function(f, ("0101", "11")) == "1101"
    assert eval_function(f, ("", "10")) == "10"


def test_pass_over_large_alphabet_is_deferred(monkeypatch):
    monkeypatch.setattr(config, "EAGER_ALPHABET", 1)
    f = rewrite(lambda s, ch: (s, ch), [BITS], BITS, name="prepend_one", direction=Direction.RTL,
                initial=0, final=lambda s: "1", bound=1)
    assert isinstance(f.automaton, DeferredAutomaton)
    assert not f.automaton.materialized
    assert eval_function(f, "0110") == "10110"
    assert not f.automaton.materialized
    built = AutomaticFunction(
        relation=AutomaticRelation(automaton=f.automaton.materialize(), bound=1), functional_certificate=True,
    )
    for x in words_upto(BITS, 6):
        assert eval_function(f, x) == eval_function(built, x), x


def test_deferred_pass_is_undefined_off_its_tracks(monkeypatch):
    monkeypatch.setattr(config, "EAGER_ALPHABET", 1)
    f = rewrite(lambda s, ch: (s, ch), [BITS], BITS, name="copy", initial=0)
    assert eval_function(f, "012") is None
    assert f.relation.contains(["01"], ["01"])


def test_scan_over_large_alphabet_is_deferred(monkeypatch):
    monkeypatch.setattr(config, "EAGER_ALPHABET", 1)
    even_ones = scan(lambda odd, ch: odd ^ (ch == "1"), lambda odd: not odd, [BITS],
                     name="even_ones", initial=False)
    assert isinstance(even_ones.automaton, DeferredAutomaton)
    built = AutomaticPredicate(automaton=even_ones.automaton.materialize())
    for x in words_upto(BITS, 6):
        assert even_ones.holds([x]) == (x.count("1") % 2 == 0) == built.holds([x]), x
    assert not even_ones.holds(["2"])


# ---------- text format ----------

def test_text_format_round_trip():
    a = divide_by_two().automaton
    loaded = load_automaton(dump_automaton(a))
    assert loaded.track_count == 2
    assert same_language_upto(a, loaded, 5)


def test_text_format_rejects_all_pad_tuple():
    text = "tracks 2\nalphabet 0\nstate a initial accepting\ntrans a (#,#) a\n"
    with pytest.raises(AutomatonFormatError):
        load_automaton(text)


def test_text_format_comments_and_errors():
    text = "; a comment\ntracks 1\nalphabet 0 1\nstate s initial accepting ; loop\ntrans s (0) s\n"
    a = load_automaton(text)
    assert a.accepts_words(["000"])
    with pytest.raises(AutomatonFormatError):
        load_automaton("tracks 1\nbogus x\n")

#!/usr/bin/env python3
"""
Tests for the program parser, the interpreter and the single-op compiler.
"""
from itertools import product

import pytest

from armkit import config
from armkit.automata.evaluation import enumerate_outputs
from armkit.automata.relations import AutomaticFunction, AutomaticRelation, identity_relation, pair_relation
from armkit.errors import AlphabetError, ArmError, BoundViolationError, CompileError, MachineKindError, ParseError
from armkit.machine.parser import format_instruction, parse_instruction, parse_program
from armkit.machine.single_op import compile_to_single_op, constant_step_language, run_single_op
from armkit.machine.trace import trace
from armkit.machine.vm import run, run_deterministic, run_nondet, run_padded, run_unbounded
from armkit.programs.instances import NtmSpec
from armkit.programs.ltwo import prog_ltwo
from armkit.programs.nondet import NONPALINDROME_SOURCE, SAT_SOURCE
from armkit.programs.nspace import gen_nspace_sim, history_witness, zeros_ones_ntm
from armkit.schemas import Outcome

BITS = ("0", "1")

# accepts exactly the words starting with 01, in two moves
ZERO_THEN_ONE = NtmSpec(
    states=("q0", "q1", "acc"),
    input_alphabet=frozenset("01"),
    tape_alphabet=frozenset("01_"),
    blank="_",
    start="q0",
    accept="acc",
    transitions={
        ("q0", "0"): frozenset({("q1", "0", 1)}),
        ("q1", "1"): frozenset({("acc", "1", 0)}),
    },
    space=(1, 1),
)

ODD_LENGTH = """\
machine DARM
alphabet 0 1
input 0
use is_odd = builtin(ltwo.is_odd)
01: read(r1)
02: if is_odd(r1) then goto(04)
03: halt_reject
04: halt_accept
"""

ONLY_EMPTY = """\
machine DARM
alphabet 0 1
use is_empty = builtin(ltwo.is_empty)
01: read(r1)
02: if is_empty(r1) then goto(04)
03: halt_reject
04: halt_accept
"""

SECOND_INPUT = """\
machine DARM
alphabet a b
01: read(r1)
02: read(r2)
03: write(r2)
04: halt
"""

IMMEDIATE_PAD = """\
machine PARM
alphabet 0 1
01: read_and_boost(r1, r2, poly, p:0:1)
02: halt_accept
"""


def words(n, alphabet="01"):
    return ["".join(letters) for k in range(n + 1) for letters in product(alphabet, repeat=k)]


# ---------- parsing ----------

def test_ltwo_parses_to_nine_lines():
    p = prog_ltwo()
    assert len(p.lines) == 9
    assert set(p.registry) == {"is_empty", "is_one", "is_odd", "divide_by_two"}
    assert p.register_count == 2


def test_single_halt_program():
    p = parse_program("01: halt_accept")
    assert len(p.lines) == 1
    assert run_deterministic(p, "").outcome == Outcome.ACCEPTED


def test_dangling_goto_is_reported_with_its_line():
    with pytest.raises(ParseError) as e:
        parse_program("01: goto(99)")
    assert e.value.line_no == 1
    assert "99" in str(e.value)


def test_duplicate_line():
    with pytest.raises(ParseError) as e:
        parse_program("01: halt_accept\n01: halt_reject")
    assert e.value.line_no == 2


def test_unknown_operation():
    with pytest.raises(ParseError, match="unknown operation"):
        parse_program("01: if nope(r1) then goto(01)")


def test_unparseable_instruction():
    with pytest.raises(ParseError) as e:
        parse_program("machine DARM\n01: jump")
    assert e.value.line_no == 2


def test_unknown_machine_kind():
    with pytest.raises(ParseError, match="unknown machine kind"):
        parse_program("machine TM\n01: halt")


def test_padded_machine_needs_a_boost():
    with pytest.raises(ParseError, match="exactly one read_and_boost"):
        parse_program("machine PARM\nalphabet 0\n01: halt_accept")


def test_boost_outside_padded_machine():
    with pytest.raises(ParseError, match="PARM or ExpARM"):
        parse_program("alphabet 0\n01: read_and_boost(r1, r2, poly, p:0:1)\n02: halt")


@pytest.mark.parametrize("body", [
    "read(r1)",
    "write(r2)",
    'r1 <- "01"',
    "r3 <- r1",
    "r2 <- divide_by_two(r1)",
    "goto(07)",
    "if is_odd(r1) then goto(09)",
    "halt_accept",
    "halt",
    "read_and_boost(r1, r2, exp, p:2:1, q:2:1, over:EA)",
])
def test_format_instruction_reads_back(body):
    instr = parse_instruction(body, 1)
    assert parse_instruction(format_instruction(instr), 1) == instr


# ---------- deterministic runs ----------

@pytest.mark.parametrize("word,outcome,steps", [
    ("", Outcome.REJECTED, 3),
    ("0", Outcome.ACCEPTED, 4),
    ("00", Outcome.ACCEPTED, 9),
    ("000", Outcome.REJECTED, 5),
    ("0000", Outcome.ACCEPTED, 14),
])
def test_ltwo_step_counts(word, outcome, steps):
    result = run_deterministic(prog_ltwo(), word)
    assert result.outcome == outcome
    assert result.det_steps == steps


def test_ltwo_membership():
    p = prog_ltwo()
    for n in range(0, 33):
        expected = n > 0 and n & (n - 1) == 0
        assert run(p, "0" * n).accepted == expected, n


def test_ltwo_steps_grow_by_five_per_halving():
    p = prog_ltwo()
    steps = [run(p, "0" * 2 ** k).det_steps for k in range(1, 9)]
    assert all(b - a == 5 for a, b in zip(steps, steps[1:]))


def test_second_input_is_written():
    result = run_deterministic(parse_program(SECOND_INPUT), ["ab", "ba"])
    assert result.outcome == Outcome.OUTPUT
    assert result.output == "ba"
    assert result.det_steps == 4


def test_missing_input_reads_empty():
    result = run_deterministic(parse_program(SECOND_INPUT), ["ab"])
    assert result.output == ""


def test_running_off_the_end_rejects():
    p = parse_program("alphabet 0\n01: read(r1)")
    result = run_deterministic(p, "0")
    assert result.outcome == Outcome.REJECTED
    assert result.det_steps == 1


def test_fuel_exhaustion_is_an_outcome():
    result = run_deterministic(parse_program("01: goto(01)"), "", fuel=10)
    assert result.outcome == Outcome.FUEL_EXHAUSTED
    assert result.det_steps == 10


def test_input_outside_alphabet():
    with pytest.raises(AlphabetError):
        run(prog_ltwo(), "01")


def test_deterministic_runner_refuses_other_kinds():
    with pytest.raises(MachineKindError):
        run_deterministic(parse_program("machine NARM\n01: halt_reject"), "")


def test_trace_has_one_line_per_step():
    result, lines = trace(prog_ltwo(), "00")
    assert len(lines) == result.det_steps == 9
    assert lines[0] == "step 1 | line 01 | r1= | r2="
    assert lines[-1].startswith("step 9 | line 08 |")


# ---------- nondeterministic and padded runs ----------

def test_nondet_halt_reject_takes_one_step():
    result = run_nondet(parse_program("machine NARM\n01: halt_reject"), "")
    assert result.outcome == Outcome.REJECTED
    assert result.det_steps == 1


def test_nondet_accepts_deterministic_programs_too():
    result = run_nondet(prog_ltwo(), "0000")
    assert result.accepted
    assert result.weak_steps == result.strong_steps == 14


@pytest.mark.parametrize("seed", range(5))
def test_padded_immediate_accept_ignores_seed(seed):
    result = run_padded(parse_program(IMMEDIATE_PAD), "0101", adversary_seed=seed)
    assert result.accepted
    assert result.det_steps == 2


@pytest.mark.parametrize("source,word", [
    (NONPALINDROME_SOURCE, "0110"),
    (NONPALINDROME_SOURCE, "01101"),
    (SAT_SOURCE, "1+|1+|1+"),
    (SAT_SOURCE, "01+|10-|11+&01-|10+|11-"),
])
def test_reverse_order_changes_nothing_but_explored(source, word):
    p = parse_program(source)
    forward = run_nondet(p, word).model_dump(exclude={"explored"})
    backward = run_nondet(p, word, reverse=True).model_dump(exclude={"explored"})
    assert forward == backward


def test_identity_only_unarm_runs_like_narm():
    text = "alphabet 0 1\ninput 0\nuse is_odd = builtin(ltwo.is_odd)\n01: read(r1)\n02: r2 <- same(r1)\n" \
           "03: if is_odd(r2) then goto(05)\n04: halt_reject\n05: halt_accept\n"
    registry = {"same": identity_relation(BITS)}
    narm = parse_program("machine NARM\n" + text, registry=registry)
    unarm = parse_program("machine UNARM\n" + text, registry=registry)
    for w in ["0" * n for n in range(8)]:
        expected = run_nondet(narm, w)
        for budget in (0, len(w)):
            assert run_unbounded(unarm, w, guess_budget=budget) == expected, (w, budget)


def test_bounded_unarm_matches_narm_on_nonpalindrome():
    narm = parse_program(NONPALINDROME_SOURCE)
    unarm = parse_program(NONPALINDROME_SOURCE.replace("machine NARM", "machine UNARM"))
    for w in words(5):
        assert run_unbounded(unarm, w, guess_budget=0) == run_nondet(narm, w), w


def test_history_witness_run():
    p = gen_nspace_sim(zeros_ones_ntm())
    for word, accepted in [("0011", True), ("01", True), ("", True), ("011", False), ("10", False)]:
        witness = history_witness(zeros_ones_ntm(), word)
        assert (witness is not None) == accepted, word
        result = run_unbounded(p, word, guess_budget=0, witnesses=[] if witness is None else [witness])
        assert result.accepted == accepted, word


def test_small_guess_budget_rejects():
    p = gen_nspace_sim(zeros_ones_ntm())
    result = run_unbounded(p, "0011", guess_budget=1)
    assert result.outcome == Outcome.REJECTED


def test_wrong_witness_rejects():
    p = gen_nspace_sim(zeros_ones_ntm())
    witness = history_witness(zeros_ones_ntm(), "01")
    result = run_unbounded(p, "0011", guess_budget=0, witnesses=[witness])
    assert not result.accepted


def test_empty_history_needs_one_guess_character():
    p = gen_nspace_sim(zeros_ones_ntm())
    assert run_unbounded(p, "", guess_budget=1).accepted
    assert run_unbounded(p, "", guess_budget=0).outcome == Outcome.REJECTED


def test_guess_budget_reaches_the_shortest_history():
    p = gen_nspace_sim(ZERO_THEN_ONE)
    witness = history_witness(ZERO_THEN_ONE, "01")
    assert len(witness) == 7
    assert run_unbounded(p, "01", guess_budget=7).accepted
    assert run_unbounded(p, "01", guess_budget=6).outcome == Outcome.REJECTED
    assert run_unbounded(p, "00", guess_budget=7).outcome == Outcome.REJECTED


def test_guess_overflow_rejects_the_path(monkeypatch, caplog):
    monkeypatch.setattr(config, "FANOUT_CAP", 16)
    p = gen_nspace_sim(zeros_ones_ntm())
    result = run_unbounded(p, "0011", guess_budget=40)
    assert result.outcome == Outcome.REJECTED
    assert "path rejected" in caplog.text


def test_bound_violation_is_an_arm_error():
    shrink = AutomaticFunction(
        relation=AutomaticRelation(
            automaton=pair_relation("00", "", BITS).automaton, bound=0, arity=1, name="shrink",
        ),
        functional_certificate=True,
    )
    p = parse_program(
        "alphabet 0 1\n01: read(r1)\n02: r2 <- shrink(r1)\n03: halt_accept", registry={"shrink": shrink},
    )
    with pytest.raises(BoundViolationError) as e:
        run(p, "00")
    assert isinstance(e.value, ArmError)


# ---------- single-op form ----------

def test_single_op_matches_instruction_level():
    p = prog_ltwo()
    g = compile_to_single_op(p)
    for n in range(0, 10):
        word = "0" * n
        direct = run(p, word)
        single = run_single_op(g, p, word)
        assert (single.outcome, single.det_steps) == (direct.outcome, direct.det_steps), word


@pytest.mark.parametrize("source,word_list", [
    ("01: halt_accept", [""]),
    (ONLY_EMPTY, words(3)),
    (ODD_LENGTH, ["0" * n for n in range(6)]),
])
def test_materialized_g_steps_like_the_program(source, word_list):
    p = parse_program(source)
    g = compile_to_single_op(p)
    for word in word_list:
        tracks = g.start(word)
        steps = 0
        while tracks[0][0] not in "ARH":
            limit = max(len(t) for t in tracks) + 2 * p.tag_width
            successors = enumerate_outputs(g.relation, tracks, max_length=limit)
            assert sorted(successors) == sorted(g.apply(tracks)), (word, tracks)
            assert len(successors) == 1
            tracks = successors[0]
            steps += 1
        direct = run(p, word)
        assert steps == direct.det_steps, word
        assert (tracks[0][0] == "A") == direct.accepted, word


def test_single_op_immediate_halt():
    p = parse_program("01: halt_accept")
    result = run_single_op(compile_to_single_op(p), p, "")
    assert result.accepted
    assert result.det_steps == 1


def test_single_op_refuses_io_in_loop():
    p = parse_program("alphabet 0\n01: read(r1)\n02: goto(01)")
    with pytest.raises(CompileError):
        compile_to_single_op(p)


def test_single_op_refuses_padded_programs():
    with pytest.raises(CompileError):
        compile_to_single_op(parse_program(IMMEDIATE_PAD))


def test_constant_step_language_of_read_then_accept():
    dfa = constant_step_language(parse_program("alphabet 0 1\n01: read(r1)\n02: halt_accept"), 1)
    assert all(dfa.accepts_words([w]) for w in words(4))


def test_constant_step_language_of_empty_check():
    dfa = constant_step_language(parse_program(ONLY_EMPTY), 2)
    assert dfa.accepts_words([""])
    assert not any(dfa.accepts_words([w]) for w in words(4) if w)


def test_constant_step_language_counts_steps():
    p = parse_program(ODD_LENGTH)
    within_three = constant_step_language(p, 2)
    within_two = constant_step_language(p, 1)
    for n in range(0, 9):
        assert within_three.accepts_words(["0" * n]) == (n % 2 == 1), n
        assert not within_two.accepts_words(["0" * n]), n


def test_constant_step_language_needs_leading_read():
    with pytest.raises(CompileError):
        constant_step_language(parse_program("01: halt_accept"), 1)

#!/usr/bin/env python3
"""
Tests for the reference oracles the library programs are verified against.
"""
import random
from itertools import product

import pytest

from armkit.core.generators import random_3sat, random_digraph, random_qbf
from armkit.errors import ResourceLimitError
from armkit.oracles import matrix_reachable, oracle_grammar, oracle_graph, oracle_logic, oracle_misc
from armkit.programs.instances import CnfFormula, GraphInstance, QbfInstance
from armkit.programs.stdlib import abc_equal, an_bn, balanced_parens, starts_with_b


def words(alphabet, n):
    return ["".join(letters) for k in range(n + 1) for letters in product(alphabet, repeat=k)]


def balanced(w):
    depth = 0
    for ch in w:
        depth += 1 if ch == "(" else -1
        if depth < 0:
            return False
    return depth == 0


# ---------- grammars ----------

def test_cyk_balanced_parens():
    for w in words("()", 8):
        assert oracle_grammar("cnf", balanced_parens(), w) == (bool(w) and balanced(w)), w


def test_boolean_cyk_starts_with_b():
    for w in words("ab", 6):
        assert oracle_grammar("boolean", starts_with_b(), w) == (len(w) >= 2 and w[0] == "b"), w


def test_boolean_cyk_abc_equal():
    for w in words("abc", 6):
        n = len(w) // 3
        expected = n > 0 and w == "a" * n + "b" * n + "c" * n
        assert oracle_grammar("boolean", abc_equal(), w) == expected, w


def test_greibach_an_bn():
    for w in words("ab", 8):
        n = len(w) // 2
        assert oracle_grammar("greibach", an_bn(), w) == (n > 0 and w == "a" * n + "b" * n), w


def test_unknown_grammar_kind():
    with pytest.raises(ValueError):
        oracle_grammar("lr1", balanced_parens(), "()")


# ---------- graphs ----------

def test_bfs_on_a_path():
    answer = oracle_graph(GraphInstance.build(4, [(1, 2), (2, 3)], [1]))
    assert answer.reachable == {1, 2, 3}
    assert answer.distances == {1: 0, 2: 1, 3: 2}


def test_bfs_uses_the_nearest_source():
    answer = oracle_graph(GraphInstance.build(4, [(1, 2), (2, 3), (3, 4), (4, 3)], [1, 4]))
    assert answer.distances == {1: 0, 4: 0, 2: 1, 3: 1}


def test_bfs_agrees_with_matrix_powers():
    rng = random.Random(11)
    for _ in range(100):
        g = random_digraph(rng.randint(1, 12), rng)
        assert oracle_graph(g).reachable == matrix_reachable(g)


# ---------- logic ----------

def test_sat_examples():
    assert oracle_logic("sat", CnfFormula(k=1, clauses=((1, 1, 1),)))
    assert not oracle_logic("sat", CnfFormula(k=1, clauses=((1, 1, 1), (-1, -1, -1))))


def test_qbf_example_is_true():
    q = QbfInstance(
        quantifiers=("E", "A", "E"),
        clauses=(((0, True), (1, True), (2, True)), ((1, False), (2, False))),
    )
    assert oracle_logic("qbf", q)


def test_qbf_universal_single_variable():
    assert not oracle_logic("qbf", QbfInstance(quantifiers=("A",), clauses=(((0, True),),)))
    assert oracle_logic("qbf", QbfInstance(quantifiers=("E",), clauses=(((0, True),),)))


def test_existential_qbf_agrees_with_sat():
    rng = random.Random(5)
    for _ in range(50):
        q = random_qbf(rng.randint(1, 5), rng, universal=False)
        f = CnfFormula(
            k=q.m,
            clauses=tuple(
                tuple((var + 1) * (1 if pos else -1) for var, pos in (clause * 3)[:3])
                for clause in q.clauses
            ),
        )
        assert oracle_logic("qbf", q) == oracle_logic("sat", f)


def test_random_3sat_uses_every_variable():
    rng = random.Random(3)
    for k in range(1, 10):
        f = random_3sat(k, rng)
        assert {abs(lit) for clause in f.clauses for lit in clause} == set(range(1, k + 1))


def test_sat_limit():
    f = CnfFormula(k=30, clauses=tuple((i, i, i) for i in range(1, 31)))
    with pytest.raises(ResourceLimitError):
        oracle_logic("sat", f)


# ---------- misc ----------

@pytest.mark.parametrize("word,expected", [("", False), ("0", True), ("000", False), ("0000", True), ("01", False)])
def test_power_of_two(word, expected):
    assert oracle_misc("power_of_two", word) == expected


def test_sorted_merge_is_numeric():
    assert oracle_misc("sorted_merge", ["0011", "0001", "0010"]) == ["0001", "0010", "0011"]


def test_zeros_ones():
    assert oracle_misc("zeros_ones", "")
    assert oracle_misc("zeros_ones", "0011")
    assert not oracle_misc("zeros_ones", "011")
    assert not oracle_misc("zeros_ones", "10")

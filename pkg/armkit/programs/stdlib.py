"""Catalog of the library programs by id, with the sample instances they are built for."""
from functools import lru_cache
from typing import Callable, Dict, List

from armkit.errors import GenerationError
from armkit.machine.program import Program
from armkit.programs.cyk import gen_boolean_cyk_program, gen_cyk_program
from armkit.programs.graph import gen_graph_program
from armkit.programs.instances import BooleanGrammar, BooleanRule, CnfGrammar, GreibachGrammar
from armkit.programs.ltwo import prog_ltwo
from armkit.programs.nondet import gen_greibach_program, prog_3sat, prog_nonpalindrome
from armkit.programs.nspace import gen_nspace_sim, zeros_ones_ntm
from armkit.programs.qsat import prog_3sat_logvars, prog_qsat
from armkit.programs.sorting import prog_sort

SORT_WIDTH = 4
LOGVARS_C = 1


def balanced_parens() -> CnfGrammar:
    """Non-empty balanced parentheses."""
    return CnfGrammar(
        nonterminals=("S", "T", "L", "R"),
        terminals=frozenset("()"),
        binary=(("S", "L", "R"), ("S", "L", "T"), ("S", "S", "S"), ("T", "S", "R")),
        unit=(("L", "("), ("R", ")")),
        start="S",
    )


def starts_with_b() -> BooleanGrammar:
    """Words over {a, b} of length at least two that do not start with a."""
    return BooleanGrammar(
        nonterminals=("S", "T", "A"),
        terminals=frozenset("ab"),
        rules=(
            BooleanRule("T", (("T", "T"),)),
            BooleanRule("S", (("T", "T"),), (("A", "T"),)),
        ),
        unit=(("T", "a"), ("T", "b"), ("A", "a")),
        start="S",
    )


def abc_equal() -> BooleanGrammar:
    """a^n b^n c^n as a^+ (b^n c^n) and (a^n b^n) c^+."""
    rules = (
        BooleanRule("A", (("P", "A"),)),
        BooleanRule("C", (("R", "C"),)),
        BooleanRule("X", (("Q", "R"),)),
        BooleanRule("X", (("Q", "X1"),)),
        BooleanRule("X1", (("X", "R"),)),
        BooleanRule("Y", (("P", "Q"),)),
        BooleanRule("Y", (("P", "Y1"),)),
        BooleanRule("Y1", (("Y", "Q"),)),
        BooleanRule("S", (("A", "X"), ("Y", "C"))),
    )
    return BooleanGrammar(
        nonterminals=("S", "A", "C", "X", "X1", "Y", "Y1", "P", "Q", "R"),
        terminals=frozenset("abc"),
        rules=rules,
        unit=(("A", "a"), ("C", "c"), ("P", "a"), ("Q", "b"), ("R", "c")),
        start="S",
    )


def an_bn() -> GreibachGrammar:
    return GreibachGrammar(
        nonterminals=("S", "B"),
        terminals=frozenset("ab"),
        rules=(("S", "a", ("S", "B")), ("S", "a", ("B",)), ("B", "b", ())),
        start="S",
    )


_FACTORIES: Dict[str, Callable[[], Program]] = {
    "ltwo": prog_ltwo,
    "cyk": lambda: gen_cyk_program(balanced_parens()),
    "boolean_cyk": lambda: gen_boolean_cyk_program(starts_with_b()),
    "graph": lambda: gen_graph_program("connectivity"),
    "graph_bfs": lambda: gen_graph_program("bfs_distance"),
    "graph_sdag": lambda: gen_graph_program("sdag"),
    "sort": lambda: prog_sort(SORT_WIDTH),
    "nonpalindrome": prog_nonpalindrome,
    "3sat": prog_3sat,
    "greibach": lambda: gen_greibach_program(an_bn()),
    "qsat": prog_qsat,
    "3sat_logvars": lambda: prog_3sat_logvars(LOGVARS_C),
    "nspace": lambda: gen_nspace_sim(zeros_ones_ntm()),
}


def stdlib_ids() -> List[str]:
    return sorted(_FACTORIES)


@lru_cache(maxsize=None)
def load_stdlib(stdlib_id: str) -> Program:
    factory = _FACTORIES.get(stdlib_id)
    if factory is None:
        raise GenerationError(f"unknown stdlib program {stdlib_id!r}; expected one of {stdlib_ids()}")
    return factory()

"""Powers of two in unary: accepts 0^(2^k)."""
from armkit.automata.onepass import OnePassSpec, build_onepass, build_predicate
from armkit.automata.relations import AutomaticFunction, AutomaticPredicate
from armkit.machine.parser import parse_program
from armkit.machine.program import Program
from armkit.programs.builtins import builtin

ALPHABET = "01"

SOURCE = """\
; L_two = { 0^(2^k) : k >= 0 }
machine DARM
alphabet 0 1
input 0
use is_empty = builtin(ltwo.is_empty)
use is_one = builtin(ltwo.is_one)
use is_odd = builtin(ltwo.is_odd)
use divide_by_two = builtin(ltwo.divide_by_two)
01: read(r1)
02: if is_empty(r1) then goto(09)
03: if is_one(r1) then goto(08)
04: if is_odd(r1) then goto(09)
05: r2 <- divide_by_two(r1)
06: r1 <- r2
07: goto(03)
08: halt_accept
09: halt_reject
"""


@builtin("ltwo.is_empty")
def is_empty() -> AutomaticPredicate:
    return build_predicate(lambda s, ch: None, lambda s: True, alphabet=ALPHABET, name="is_empty")


@builtin("ltwo.is_one")
def is_one() -> AutomaticPredicate:
    return build_predicate(
        lambda zeros, ch: zeros + (ch == "0") if zeros + (ch == "0") <= 1 else None,
        lambda zeros: zeros == 1,
        alphabet=ALPHABET,
        name="is_one",
    )


@builtin("ltwo.is_odd")
def is_odd() -> AutomaticPredicate:
    return build_predicate(
        lambda odd, ch: odd ^ (ch == "0"),
        lambda odd: odd,
        initial=False,
        alphabet=ALPHABET,
        name="is_odd",
    )


@builtin("ltwo.divide_by_two")
def divide_by_two() -> AutomaticFunction:
    """Every second '0' becomes '1'."""
    def step(odd, ch):
        if ch == "1":
            return odd, "1"
        return (not odd), ("1" if odd else "0")

    return build_onepass(OnePassSpec.from_step(
        step, lambda s: "", initial=False, alphabet=ALPHABET, name="divide_by_two",
    ))


def prog_ltwo() -> Program:
    return parse_program(SOURCE, name="ltwo")

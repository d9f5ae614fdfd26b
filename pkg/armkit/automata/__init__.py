# Automatic relations module
from armkit.automata.convolution import PAD, convolve, deconvolve, symbols_over, symbols_over_tracks
from armkit.automata.automaton import TrackAutomaton, dump_automaton, load_automaton
from armkit.automata.operations import (
    CombineMode,
    boolean_combine,
    cylindrify,
    determinize,
    determinize_minimize,
    minimize,
    project,
    same_language_upto,
    synchronized_product,
    universal,
    wellformed_automaton,
)
from armkit.automata.relations import (
    AutomaticFunction,
    AutomaticPredicate,
    AutomaticRelation,
    certify,
    check_functional,
    compose,
    constant_relation,
    identity_relation,
    make_relation,
    pair_relation,
    validate_relation,
)
from armkit.automata.evaluation import enumerate_outputs, eval_function
from armkit.automata.onepass import (
    DeferredAutomaton,
    Direction,
    OnePassSpec,
    build_nondet_pass,
    build_onepass,
    build_predicate,
    defer_onepass,
    defer_predicate,
)

__all__ = [
    "PAD", "convolve", "deconvolve", "symbols_over", "symbols_over_tracks",
    "TrackAutomaton", "dump_automaton", "load_automaton",
    "CombineMode", "boolean_combine", "cylindrify", "determinize", "determinize_minimize",
    "minimize", "project", "same_language_upto", "synchronized_product", "universal",
    "wellformed_automaton",
    "AutomaticFunction", "AutomaticPredicate", "AutomaticRelation", "certify",
    "check_functional", "compose", "constant_relation", "identity_relation", "make_relation", "pair_relation",
    "validate_relation",
    "enumerate_outputs", "eval_function",
    "DeferredAutomaton", "Direction", "OnePassSpec", "build_nondet_pass", "build_onepass", "build_predicate",
    "defer_onepass", "defer_predicate",
]

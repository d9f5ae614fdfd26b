# Reference implementations the library programs are checked against
from armkit.oracles.grammar import oracle_grammar
from armkit.oracles.graph import GraphAnswer, matrix_reachable, oracle_graph
from armkit.oracles.logic import oracle_logic
from armkit.oracles.misc import oracle_misc

__all__ = ["oracle_grammar", "GraphAnswer", "matrix_reachable", "oracle_graph", "oracle_logic", "oracle_misc"]

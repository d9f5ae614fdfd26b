"""Brute-force SAT and QBF evaluation."""
from itertools import product
from typing import Dict, Union

from armkit.errors import ResourceLimitError
from armkit.programs.instances import CnfFormula, QbfInstance

SAT_LIMIT = 20
QBF_LIMIT = 12


def sat(f: CnfFormula) -> bool:
    """Tries all 2^k assignments."""
    if f.k > SAT_LIMIT:
        raise ResourceLimitError(f"{f.k} variables; the SAT oracle stops at {SAT_LIMIT}")
    for values in product((False, True), repeat=f.k):
        if all(any(values[abs(lit) - 1] == (lit > 0) for lit in clause) for clause in f.clauses):
            return True
    return False


def qbf(q: QbfInstance) -> bool:
    """Recursive evaluation along the prefix, variable m-1 first."""
    if q.m > QBF_LIMIT:
        raise ResourceLimitError(f"{q.m} variables; the QBF oracle stops at {QBF_LIMIT}")

    def holds(assignment: Dict[int, bool]) -> bool:
        return all(any(assignment[var] == positive for var, positive in clause) for clause in q.clauses)

    def value(var: int, assignment: Dict[int, bool]) -> bool:
        if var < 0:
            return holds(assignment)
        branches = (value(var - 1, {**assignment, var: bit}) for bit in (False, True))
        return any(branches) if q.quantifier_of(var) == "E" else all(branches)

    return value(q.m - 1, {})


def oracle_logic(kind: str, instance: Union[CnfFormula, QbfInstance]) -> bool:
    if kind == "sat":
        return sat(instance)
    if kind == "qbf":
        return qbf(instance)
    raise ValueError(f"unknown logic kind {kind!r}")

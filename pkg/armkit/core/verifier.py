"""Oracle-equivalence checks of the stdlib programs.

Every stdlib id has one entry: the generator its instances come from, the
oracle answer for an instance, and how to read the same answer off a run.
"""
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

from armkit import config
from armkit.core.generators import Case, generate
from armkit.errors import GenerationError
from armkit.machine.program import MachineKind, Program
from armkit.machine.vm import run_deterministic, run_nondet, run_padded, run_unbounded
from armkit.oracles import oracle_grammar, oracle_graph, oracle_logic, oracle_misc
from armkit.programs.encoders import decode_distances, decode_reachable
from armkit.programs.nspace import history_witness, zeros_ones_ntm
from armkit.programs.stdlib import LOGVARS_C, an_bn, balanced_parens, load_stdlib, starts_with_b
from armkit.schemas import Mismatch, Outcome, RunResult, VerificationReport, VerifyRequest

logger = logging.getLogger(__name__)

# padded programs must answer the same for every pad length
ADVERSARY_SEEDS = 5


def _accepted(result: RunResult) -> bool:
    return result.outcome == Outcome.ACCEPTED


def _reachable(result: RunResult):
    return None if result.output is None else sorted(decode_reachable(result.output))


def _distances(result: RunResult):
    return None if result.output is None else decode_distances(result.output)


def _sorted(result: RunResult):
    return None if result.output is None else result.output.split("|")


def _logvars(case: Case) -> bool:
    q = case.instance
    if "A" in q.quantifiers or q.m > LOGVARS_C * (len(case.input).bit_length() - 1):
        return False
    return oracle_logic("qbf", q)


def _witnessed(p: Program, case: Case, fuel: int) -> RunResult:
    """The history guess is replaced by a computed accepting history, if any."""
    witness = history_witness(zeros_ones_ntm(), case.input)
    return run_unbounded(p, case.input, guess_budget=0, fuel=fuel,
                         witnesses=[] if witness is None else [witness])


@dataclass(frozen=True)
class Entry:
    generator: str
    expected: Callable[[Case], Any]
    observed: Callable[[RunResult], Any] = _accepted
    size_cap: Optional[int] = None
    runner: Optional[Callable[[Program, Case, int], RunResult]] = None


ENTRIES: Dict[str, Entry] = {
    "ltwo": Entry("zeros", lambda c: oracle_misc("power_of_two", c.input)),
    "cyk": Entry("parens_noise", lambda c: oracle_grammar("cnf", balanced_parens(), c.input)),
    "boolean_cyk": Entry("ab", lambda c: oracle_grammar("boolean", starts_with_b(), c.input)),
    "graph": Entry("digraph", lambda c: sorted(oracle_graph(c.instance).reachable), _reachable),
    "graph_sdag": Entry("sdag", lambda c: sorted(oracle_graph(c.instance).reachable), _reachable),
    "graph_bfs": Entry("digraph", lambda c: oracle_graph(c.instance).distances, _distances),
    "sort": Entry("numbers", lambda c: oracle_misc("sorted_merge", c.instance), _sorted),
    "nonpalindrome": Entry("binary", lambda c: not oracle_misc("palindrome", c.input)),
    "3sat": Entry("3sat", lambda c: oracle_logic("sat", c.instance)),
    "greibach": Entry("ab", lambda c: oracle_grammar("greibach", an_bn(), c.input)),
    "qsat": Entry("small_qsat", lambda c: oracle_logic("qbf", c.instance), size_cap=4),
    "3sat_logvars": Entry("logvars", _logvars),
    "nspace": Entry("binary", lambda c: oracle_misc("zeros_ones", c.input), runner=_witnessed),
}


class VerificationManager:
    """Handles oracle-equivalence runs over generated instances."""

    def __init__(self, fuel: Optional[int] = None):
        self.fuel = fuel

    def _fuel(self, case: Case) -> int:
        return self.fuel if self.fuel is not None else config.default_fuel(len(case.input))

    def _run(self, p: Program, entry: Entry, case: Case) -> List[RunResult]:
        fuel = self._fuel(case)
        if entry.runner is not None:
            return [entry.runner(p, case, fuel)]
        if p.kind == MachineKind.DARM:
            return [run_deterministic(p, case.input, fuel)]
        if p.kind == MachineKind.NARM:
            return [run_nondet(p, case.input, fuel)]
        if p.kind.padded:
            return [run_padded(p, case.input, seed, fuel) for seed in range(ADVERSARY_SEEDS)]
        raise GenerationError(f"{p.name} is {p.kind.value} and has no runner")

    def verify(self, stdlib_id: str, count: int = 20, max_size: int = 8) -> VerificationReport:
        entry = ENTRIES.get(stdlib_id)
        if entry is None:
            raise GenerationError(f"no verification entry for {stdlib_id!r}; expected one of {sorted(ENTRIES)}")
        if count < 1 or max_size < 1:
            raise GenerationError("count and max_size must be positive")
        p = load_stdlib(stdlib_id)
        top = min(max_size, entry.size_cap or max_size)
        report = VerificationReport(stdlib_id=stdlib_id)
        for i in range(count):
            case = generate(entry.generator, 1 + i % top, i)
            results = self._run(p, entry, case)
            report.checked += 1
            if any(r.outcome == Outcome.FUEL_EXHAUSTED for r in results):
                logger.warning("%s: fuel exhausted on %r", stdlib_id, case.input[:60])
                report.fuel_exhausted += 1
                continue
            answers = [entry.observed(r) for r in results]
            expected = entry.expected(case)
            if any(a != answers[0] for a in answers):
                report.mismatches.append(Mismatch(instance=case.input, expected=expected, got=answers))
            elif answers[0] != expected:
                report.mismatches.append(Mismatch(instance=case.input, expected=expected, got=answers[0]))
        logger.info("verified %s: %d checked, %d mismatches, %d out of fuel", stdlib_id,
                    report.checked, len(report.mismatches), report.fuel_exhausted)
        return report

    def handle(self, request: VerifyRequest) -> VerificationReport:
        return self.verify(request.stdlib_id, request.count, request.max_size)

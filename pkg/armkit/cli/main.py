"""armkit command line: run, trace, profile, fit, verify and inspect programs.

Exit codes: 0 accepted / output / success, 1 rejected, 2 fuel exhausted,
3 usage or format error.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from armkit import config
from armkit.automata.automaton import dump_automaton, load_automaton
from armkit.automata.relations import check_functional, make_relation, validate_relation
from armkit.cli.fit import fit_growth
from armkit.cli.profile import profile_steps, read_tsv, render_tsv, write_tsv
from armkit.core.verifier import VerificationManager
from armkit.errors import ArmError, EncodingError, ProfilingError
from armkit.machine.parser import parse_program
from armkit.machine.program import Program
from armkit.machine.single_op import compile_to_single_op
from armkit.machine.trace import trace
from armkit.machine.vm import run, run_unbounded
from armkit.programs.emit import emit_program
from armkit.programs.encoders import encode_3sat, encode_graph, encode_qsat, graph_tape
from armkit.programs.instances import CnfFormula, GraphInstance, QbfInstance
from armkit.programs.stdlib import load_stdlib, stdlib_ids
from armkit.schemas import Outcome, RunResult

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_FUEL = 2
EXIT_USAGE = 3

_EXIT = {
    Outcome.ACCEPTED: EXIT_OK,
    Outcome.OUTPUT: EXIT_OK,
    Outcome.REJECTED: EXIT_REJECTED,
    Outcome.FUEL_EXHAUSTED: EXIT_FUEL,
}


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with the usage code instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load_program(ref: str) -> Program:
    """A .arm file, or the id of a stdlib program."""
    path = Path(ref)
    if path.is_file():
        return parse_program(path.read_text(encoding="utf-8"), base_dir=path.parent, name=path.stem)
    return load_stdlib(ref)


def _text_or_file(value: str) -> str:
    path = Path(value)
    if value and path.is_file():
        return path.read_text(encoding="utf-8").rstrip("\n")
    return value


def _report(result: RunResult) -> str:
    parts = [f"outcome: {result.outcome.value}", f"steps: {result.det_steps}"]
    if result.weak_steps is not None:
        parts += [f"weak: {result.weak_steps}", f"strong: {result.strong_steps}"]
    if result.output is not None:
        parts.append(f"output: {result.output}")
    return "\n".join(parts)


def cmd_run(args) -> int:
    p = load_program(args.program)
    inputs: List[str] = [_text_or_file(v) for v in (args.input or [""])]
    if args.trace:
        result, lines = trace(p, inputs, args.fuel, args.seed)
        Path(args.trace).write_text("\n".join(lines) + "\n", encoding="utf-8")
    elif args.witness is not None:
        result = run_unbounded(p, inputs, guess_budget=0, fuel=args.fuel,
                               witnesses=[_text_or_file(w) for w in args.witness])
    else:
        result = run(p, inputs, fuel=args.fuel, seed=args.seed, guess_budget=args.guess_budget)
    print(_report(result))
    return _EXIT[result.outcome]


def _sizes(text: str) -> List[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers, got {text!r}")


def cmd_profile(args) -> int:
    p = load_program(args.program)
    profile = profile_steps(p, args.gen, args.sizes, args.seeds, args.fuel, by_length=args.by_length)
    if args.out:
        write_tsv(profile, Path(args.out))
    else:
        sys.stdout.write(render_tsv(profile))
    return EXIT_OK


def cmd_fit(args) -> int:
    fit = fit_growth(read_tsv(Path(args.profile)), args.measure)
    print(f"model: {fit.model.value}\na: {fit.a:.6g}\nb: {fit.b:.6g}\nresidual: {fit.residual:.6g}")
    for model, residual in fit.residuals.items():
        print(f"  {model}\t{residual:.6g}")
    return EXIT_OK


def cmd_verify(args) -> int:
    report = VerificationManager(args.fuel).verify(args.stdlib_id, args.count, args.max_size)
    print(report.model_dump_json(indent=2))
    if report.mismatches:
        return EXIT_REJECTED
    return EXIT_FUEL if report.fuel_exhausted else EXIT_OK


def cmd_compile_g(args) -> int:
    p = load_program(args.program)
    relation = compile_to_single_op(p).relation
    Path(args.out).write_text(dump_automaton(relation.automaton), encoding="utf-8")
    print(f"{len(relation.automaton.states)} states, {relation.automaton.track_count} tracks")
    return EXIT_OK


def cmd_check_rel(args) -> int:
    a = load_automaton(Path(args.file).read_text(encoding="utf-8"))
    arity = args.arity if args.arity is not None else a.track_count // 2
    report = validate_relation(a, arity)
    print(f"wellformed: {str(report.wellformed).lower()}")
    print(f"bound: {'inf' if report.bound is None else report.bound}")
    if report.wellformed:
        functional = check_functional(make_relation(a, arity))
        print(f"functional: {str(functional).lower()}")
    return EXIT_OK


def _instance(kind: str, data: dict):
    try:
        if kind == "graph":
            return GraphInstance.build(data["n"], data.get("edges", []), data.get("sources", []))
        if kind == "sat":
            return CnfFormula(k=data["k"], clauses=tuple(tuple(c) for c in data["clauses"]))
        return QbfInstance(
            quantifiers=tuple(data["quantifiers"]),
            clauses=tuple(tuple((int(v), bool(pos)) for v, pos in c) for c in data["clauses"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ArmError):
            raise
        raise EncodingError(f"bad {kind} instance: {e}") from e


def cmd_encode(args) -> int:
    try:
        data = json.loads(Path(args.file).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise EncodingError(f"{args.file}: not JSON ({e})") from e
    instance = _instance(args.kind, data)
    if args.kind == "graph":
        text = encode_graph(instance, ticked=not args.unticked, membership=args.membership)
        print(graph_tape(text) if args.tape else text)
    elif args.kind == "sat":
        print(encode_3sat(instance))
    else:
        print(encode_qsat(instance))
    return EXIT_OK


def cmd_emit(args) -> int:
    if args.stdlib_id != "all":
        print(emit_program(load_stdlib(args.stdlib_id), Path(args.out), f"{args.stdlib_id}.arm"))
        return EXIT_OK
    # one directory each, automaton file names repeat across programs
    for stdlib_id in stdlib_ids():
        print(emit_program(load_stdlib(stdlib_id), Path(args.out) / stdlib_id, f"{stdlib_id}.arm"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="armkit", description="Automatic register machine toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="run a program (.arm file or stdlib id)")
    r.add_argument("program")
    r.add_argument("--input", action="append", help="input string or file; repeat for multi-input DARM")
    r.add_argument("--trace", help="write a per-step trace to this file")
    r.add_argument("--fuel", type=int)
    r.add_argument("--seed", type=int, default=0, help="adversary seed for padded machines")
    r.add_argument("--guess-budget", type=int, help="longest unbounded guess (UNARM)")
    r.add_argument("--witness", action="append", help="take unbounded guesses from these strings or files")
    r.set_defaults(func=cmd_run)

    p = sub.add_parser("profile", help="step counts over a size sweep")
    p.add_argument("program")
    p.add_argument("--gen", required=True, help="instance generator id")
    p.add_argument("--sizes", required=True, type=_sizes, help="comma-separated sizes")
    p.add_argument("--seeds", type=int, default=config.PROFILE_SEEDS)
    p.add_argument("--fuel", type=int)
    p.add_argument("--by-length", action="store_true", help="report the median input length as n")
    p.add_argument("--out", help="profile TSV (stdout if omitted)")
    p.set_defaults(func=cmd_profile)

    f = sub.add_parser("fit", help="fit growth models to a profile TSV")
    f.add_argument("profile")
    f.add_argument("--measure", choices=["steps", "weak", "strong"], default="steps")
    f.set_defaults(func=cmd_fit)

    v = sub.add_parser("verify", help="compare a stdlib program against its oracle")
    v.add_argument("stdlib_id")
    v.add_argument("--count", type=int, default=20)
    v.add_argument("--max-size", type=int, default=8)
    v.add_argument("--fuel", type=int)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("compile-g", help="write the single-operation automaton of a program")
    g.add_argument("program")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_compile_g)

    c = sub.add_parser("check-rel", help="wellformedness, bound and functionality of an automaton file")
    c.add_argument("file")
    c.add_argument("--arity", type=int, help="input tracks (default: half the tracks)")
    c.set_defaults(func=cmd_check_rel)

    e = sub.add_parser("encode", help="render a JSON instance in the machine's input format")
    e.add_argument("kind", choices=["graph", "sat", "qsat"])
    e.add_argument("file")
    e.add_argument("--tape", action="store_true", help="graph: one character per cell")
    e.add_argument("--unticked", action="store_true", help="graph: leave the sources unmarked")
    e.add_argument("--membership", action="store_true", help="graph: sources as a trailing bitstring")
    e.set_defaults(func=cmd_encode)

    m = sub.add_parser("emit", help="write stdlib programs as DSL files")
    m.add_argument("stdlib_id", help="stdlib id or 'all'")
    m.add_argument("--out", required=True, help="target directory")
    m.set_defaults(func=cmd_emit)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    config.configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProfilingError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE if e.size is None else EXIT_FUEL
    except ArmError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

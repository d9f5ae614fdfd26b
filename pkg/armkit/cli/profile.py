"""Step-count sweeps over generated instances, and their TSV form."""
import csv
import io
import logging
from pathlib import Path
from statistics import median
from typing import Iterable, List, Optional

from armkit import config
from armkit.core.generators import generate
from armkit.errors import ProfilingError
from armkit.machine.program import MachineKind, Program
from armkit.machine.vm import run
from armkit.schemas import Outcome, RunResult, StepProfile, StepSample

logger = logging.getLogger(__name__)

TSV_HEADER = ["n", "steps_med", "steps_min", "steps_max"]
NONDET_COLUMNS = ["weak_med", "strong_med"]


def _steps(p: Program, result: RunResult) -> int:
    """Accepting NARM runs count their shortest accepting path."""
    if p.kind == MachineKind.NARM and result.weak_steps is not None:
        return result.weak_steps
    return result.det_steps


def _sample(p: Program, generator: str, n: int, seeds: int, fuel: Optional[int],
            by_length: bool = False) -> StepSample:
    steps: List[int] = []
    weak: List[int] = []
    strong: List[int] = []
    lengths: List[int] = []
    accepted = 0
    for seed in range(seeds):
        case = generate(generator, n, seed)
        result = run(p, case.input, fuel=fuel, seed=seed)
        if result.outcome == Outcome.FUEL_EXHAUSTED:
            raise ProfilingError(n, f"fuel exhausted on seed {seed} after {result.det_steps} steps")
        steps.append(_steps(p, result))
        lengths.append(len(case.input))
        accepted += result.accepted
        if result.weak_steps is not None:
            weak.append(result.weak_steps)
            strong.append(result.strong_steps)
    nondet = p.kind == MachineKind.NARM
    return StepSample(
        n=int(median(lengths)) if by_length else n,
        steps_med=median(steps),
        steps_min=min(steps),
        steps_max=max(steps),
        weak_med=median(weak) if nondet and weak else None,
        strong_med=median(strong) if nondet and strong else None,
        meta={"seeds": seeds, "accepted": accepted, "input_len_med": median(lengths)},
    )


def profile_steps(
    p: Program,
    generator: str,
    sizes: Iterable[int],
    seeds: Optional[int] = None,
    fuel: Optional[int] = None,
    by_length: bool = False,
) -> StepProfile:
    """Medians over seeds 0..seeds-1 of the generator at every size.

    The same program, generator, sizes and seeds give the same profile.
    With `by_length` a sample reports the median input length as its n,
    for generators that only approach the requested size.
    """
    seeds = config.PROFILE_SEEDS if seeds is None else seeds
    if seeds < 1:
        raise ProfilingError(None, "need at least one seed per size")
    samples = []
    for n in sorted(set(sizes)):
        sample = _sample(p, generator, n, seeds, fuel, by_length)
        logger.info("%s n=%d: median %g steps (%d..%d)", p.name or "program", n, sample.steps_med,
                    sample.steps_min, sample.steps_max)
        samples.append(sample)
    return StepProfile(program=p.name, generator=generator, samples=samples)


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def render_tsv(profile: StepProfile) -> str:
    """Header row, then one row per size; NARM profiles add weak and strong columns."""
    nondet = any(s.weak_med is not None for s in profile.samples)
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n")
    writer.writerow(TSV_HEADER + (NONDET_COLUMNS if nondet else []))
    for s in profile.samples:
        row = [s.n, _num(s.steps_med), s.steps_min, s.steps_max]
        if nondet:
            row += ["" if v is None else _num(v) for v in (s.weak_med, s.strong_med)]
        writer.writerow(row)
    return buf.getvalue()


def write_tsv(profile: StepProfile, path: Path) -> None:
    Path(path).write_text(render_tsv(profile), encoding="utf-8")


def read_tsv(path: Path) -> StepProfile:
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f, delimiter="\t"))
    try:
        samples = [
            StepSample(
                n=int(row["n"]),
                steps_med=float(row["steps_med"]),
                steps_min=int(row["steps_min"]),
                steps_max=int(row["steps_max"]),
                weak_med=float(row["weak_med"]) if row.get("weak_med") else None,
                strong_med=float(row["strong_med"]) if row.get("strong_med") else None,
            )
            for row in rows
        ]
        return StepProfile(program=Path(path).stem, samples=samples)
    except (KeyError, TypeError, ValueError) as e:
        raise ProfilingError(None, f"{path}: not a profile table ({e})") from e

#!/usr/bin/env python3
"""
Tests for growth fitting, step profiles and the armkit command line.
"""
import json
import math

import pytest

from armkit.cli.fit import evaluate, fit_growth
from armkit.cli.main import EXIT_FUEL, EXIT_OK, EXIT_REJECTED, EXIT_USAGE, main
from armkit.cli.profile import profile_steps, read_tsv, render_tsv, write_tsv
from armkit.errors import FitError, ProfilingError
from armkit.programs.stdlib import load_stdlib
from armkit.schemas import GrowthModel, StepProfile, StepSample


def table(sizes, f):
    samples = []
    for n in sizes:
        y = f(n)
        samples.append(StepSample(n=n, steps_med=y, steps_min=max(1, math.floor(y)), steps_max=math.ceil(y)))
    return StepProfile(program="synthetic", samples=samples)


# ---------- fit ----------

def test_exact_quadratic():
    fit = fit_growth(table([4, 8, 16, 32], lambda n: n * n))
    assert fit.model == GrowthModel.QUADRATIC
    assert fit.a == pytest.approx(1.0)
    assert fit.b == pytest.approx(0.0, abs=1e-6)
    assert fit.residual < 1e-9


def test_exact_linear():
    fit = fit_growth(table([4, 8, 16, 32], lambda n: 3 * n + 7))
    assert fit.model == GrowthModel.LINEAR
    assert fit.a == pytest.approx(3.0)
    assert fit.b == pytest.approx(7.0)


def test_log_beats_polylog_on_a_tie():
    # 5 samples let polylog-deg3 take part; it fits just as exactly
    fit = fit_growth(table([2, 4, 8, 16, 32], lambda n: 5 * math.log2(n) + 4))
    assert fit.model == GrowthModel.LOG
    assert fit.a == pytest.approx(5.0)
    assert fit.b == pytest.approx(4.0)
    assert GrowthModel.POLYLOG3.value in fit.residuals


def test_polylog_needs_five_samples():
    fit = fit_growth(table([4, 8, 16, 32], lambda n: n))
    assert GrowthModel.POLYLOG3.value not in fit.residuals


def test_fit_is_scale_equivariant():
    base = fit_growth(table([8, 16, 32, 64, 128], lambda n: 2 * n * math.log2(n) + 30))
    scaled = fit_growth(table([8, 16, 32, 64, 128], lambda n: 14 * n * math.log2(n) + 210))
    assert base.model == scaled.model == GrowthModel.N_LOG_N
    assert scaled.a == pytest.approx(7 * base.a)
    assert scaled.b == pytest.approx(7 * base.b)
    assert scaled.residual == pytest.approx(base.residual, abs=1e-9)


def test_recovers_n_over_log_n():
    fit = fit_growth(table([16, 64, 256, 1024, 4096], lambda n: 4 * n / math.log2(n) + 12))
    assert fit.model == GrowthModel.N_OVER_LOG
    assert evaluate(fit.model, fit.a, fit.b, 512) == pytest.approx(4 * 512 / 9 + 12)


def test_too_few_samples():
    with pytest.raises(FitError, match="at least 3"):
        fit_growth(table([4, 16], lambda n: n))


def test_sizes_must_span():
    with pytest.raises(FitError, match="span"):
        fit_growth(table([4, 5, 6, 7], lambda n: n))


def test_missing_weak_measure():
    with pytest.raises(FitError):
        fit_growth(table([4, 8, 16], lambda n: n), measure="weak")


def test_sizes_must_increase():
    with pytest.raises(ValueError):
        StepProfile(samples=[StepSample(n=4, steps_med=1, steps_min=1, steps_max=1),
                             StepSample(n=4, steps_med=1, steps_min=1, steps_max=1)])


# ---------- profiles ----------

def test_ltwo_profile():
    profile = profile_steps(load_stdlib("ltwo"), "zeros", [8, 1, 2, 4, 4], seeds=2)
    assert [s.n for s in profile.samples] == [1, 2, 4, 8]
    assert [s.steps_med for s in profile.samples] == [4, 9, 14, 19]
    assert all(s.meta["accepted"] == 2 for s in profile.samples)


def test_profile_is_reproducible():
    p = load_stdlib("nonpalindrome")
    first = profile_steps(p, "nonpalindrome", [2, 4, 8], seeds=3)
    second = profile_steps(p, "nonpalindrome", [2, 4, 8], seeds=3)
    assert first.model_dump() == second.model_dump()
    assert all(s.weak_med is not None for s in first.samples)


def test_profile_fuel_exhaustion_names_the_size():
    with pytest.raises(ProfilingError) as e:
        profile_steps(load_stdlib("ltwo"), "zeros", [1, 16], seeds=1, fuel=10)
    assert e.value.size == 16


def test_tsv_reads_back(tmp_path):
    profile = profile_steps(load_stdlib("ltwo"), "zeros", [1, 2, 4], seeds=1)
    path = tmp_path / "ltwo.tsv"
    write_tsv(profile, path)
    again = read_tsv(path)
    assert [(s.n, s.steps_med, s.steps_min, s.steps_max) for s in again.samples] == \
        [(s.n, s.steps_med, s.steps_min, s.steps_max) for s in profile.samples]
    assert render_tsv(profile).splitlines()[0] == "n\tsteps_med\tsteps_min\tsteps_max"


def test_nondet_tsv_has_weak_and_strong_columns():
    profile = profile_steps(load_stdlib("nonpalindrome"), "nonpalindrome", [2, 4], seeds=1)
    assert render_tsv(profile).splitlines()[0].endswith("weak_med\tstrong_med")


def test_read_tsv_rejects_other_tables(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("size\tsteps\n4\t10\n")
    with pytest.raises(ProfilingError):
        read_tsv(path)


# ---------- command line ----------

def test_run_exit_codes(capsys):
    assert main(["run", "ltwo", "--input", "0000"]) == EXIT_OK
    assert "outcome: accepted" in capsys.readouterr().out
    assert main(["run", "ltwo", "--input", "000"]) == EXIT_REJECTED


def test_run_fuel_exit_code(tmp_path):
    loop = tmp_path / "loop.arm"
    loop.write_text("01: goto(01)\n")
    assert main(["run", str(loop), "--fuel", "5"]) == EXIT_FUEL


def test_run_writes_trace(tmp_path):
    out = tmp_path / "trace.txt"
    assert main(["run", "ltwo", "--input", "00", "--trace", str(out)]) == EXIT_OK
    assert len(out.read_text().splitlines()) == 9


def test_unknown_program_is_a_usage_error():
    assert main(["run", "no_such_program"]) == EXIT_USAGE


def test_bad_arguments_exit_with_usage_code():
    with pytest.raises(SystemExit) as e:
        main(["profile", "ltwo"])
    assert e.value.code == EXIT_USAGE


def test_missing_profile_file(tmp_path):
    assert main(["fit", str(tmp_path / "absent.tsv")]) == EXIT_USAGE


def test_profile_then_fit(tmp_path, capsys):
    out = tmp_path / "ltwo.tsv"
    assert main(["profile", "ltwo", "--gen", "zeros", "--sizes", "2,4,8,16,32", "--seeds", "1",
                 "--out", str(out)]) == EXIT_OK
    assert main(["fit", str(out)]) == EXIT_OK
    assert "model: log n" in capsys.readouterr().out


def test_encode_graph_file(tmp_path, capsys):
    spec = tmp_path / "g.json"
    spec.write_text(json.dumps({"n": 2, "edges": [[1, 2]], "sources": [1]}))
    assert main(["encode", "graph", str(spec)]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "|^0^1|0010|10|0000|"


def test_encode_rejects_bad_instance(tmp_path):
    spec = tmp_path / "f.json"
    spec.write_text(json.dumps({"k": 3, "clauses": [[1, 1, 2]]}))
    assert main(["encode", "sat", str(spec)]) == EXIT_USAGE


def test_verify_command(capsys):
    assert main(["verify", "ltwo", "--count", "4"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["checked"] == 4


def test_compile_and_check_relation(tmp_path, capsys):
    program = tmp_path / "halt.arm"
    program.write_text("01: halt_accept\n")
    g = tmp_path / "g.aut"
    assert main(["compile-g", str(program), "--out", str(g)]) == EXIT_OK
    assert main(["check-rel", str(g)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "wellformed: true" in out
    assert "functional: true" in out


def test_emit_then_run(tmp_path):
    assert main(["emit", "ltwo", "--out", str(tmp_path)]) == EXIT_OK
    assert main(["run", str(tmp_path / "ltwo.arm"), "--input", "0000"]) == EXIT_OK


# ---------- growth sweeps ----------

@pytest.mark.slow
@pytest.mark.parametrize("stdlib_id,gen,sizes,model", [
    ("ltwo", "zeros", [2, 4, 8, 16, 32, 64, 128, 256], GrowthModel.LOG),
    ("graph_sdag", "sdag", [8, 16, 32, 64], GrowthModel.LINEAR),
    ("graph", "reachable_chain", [8, 16, 32, 64], GrowthModel.N_LOG_N),
    ("cyk", "parens", [8, 16, 32, 64], GrowthModel.QUADRATIC),
])
def test_growth_recovery(stdlib_id, gen, sizes, model):
    fit = fit_growth(profile_steps(load_stdlib(stdlib_id), gen, sizes, seeds=3))
    assert fit.model == model
    assert fit.residual < 0.15


@pytest.mark.slow
def test_nonpalindrome_weak_steps_grow_logarithmically():
    profile = profile_steps(load_stdlib("nonpalindrome"), "nonpalindrome", [4, 8, 16, 32, 64], seeds=3)
    fit = fit_growth(profile, measure="weak")
    assert fit.model == GrowthModel.LOG


@pytest.mark.slow
def test_qsat_steps_grow_linearly_in_input_length():
    sizes = [40, 80, 140, 200]
    profile = profile_steps(load_stdlib("qsat"), "qsat", sizes, seeds=1, by_length=True)
    assert all(s.n >= size for s, size in zip(profile.samples, sizes))
    fit = fit_growth(profile)
    assert fit.model == GrowthModel.LINEAR

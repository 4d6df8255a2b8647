"""Report formatting: percent strings, tables, convergence artifacts."""

import json

import pytest

from kernelsweep import report
from kernelsweep.backend import Candidate
from kernelsweep.backend.oracle import ORACLE_SEED_SOURCE, OracleBackend, oracle_source
from kernelsweep.evolve import run_sweep
from kernelsweep.mutators import ScriptedMutator
from kernelsweep.roofline import ChipPeaks
from kernelsweep.tasks import build_task

CHIP = ChipPeaks("test-chip", 4500.0, 200.0)


@pytest.mark.parametrize(
    "fraction,expected",
    [(0.93, "93%"), (0.085, "8.5%"), (0.016, "1.6%"), (0.0031, "0.31%"), (0.45, "45%"), (0.102, "10%")],
)
def test_format_fraction(fraction, expected):
    assert report.format_fraction(fraction) == expected


def test_format_speedup():
    assert report.format_speedup(2.95) == "2.95x"
    assert report.format_speedup(None) == "--"


def _sweep_log(tmp_path, name, task_id, sources, iters):
    d = tmp_path / name
    d.mkdir()
    for i, s in enumerate(sources):
        (d / f"{i:02d}.json").write_text(s)
    mut = ScriptedMutator(d)
    task = build_task(task_id)
    backend = OracleBackend(CHIP)
    out = tmp_path / f"{name}-out"
    run_sweep(
        task,
        mut,
        iters,
        backend,
        CHIP,
        seed=1,
        seed_candidate=Candidate(ORACLE_SEED_SOURCE, dialect="oracle"),
        out_dir=out,
    )
    return out / "run.jsonl"


def test_single_log_renders_one_row_with_four_fields(tmp_path):
    path = _sweep_log(tmp_path, "a", "heat2d", [oracle_source(slowdown=1.5)], 1)
    log = report.load_run_log(path)
    rows = report.summary_rows([log])
    assert len(rows) == 1
    row = rows[0]
    for key in ("in_dist_x", "held_out_fraction", "held_out_x", "outcome"):
        assert key in row
    table = report.render_table(rows)
    assert "heat2d" in table and "1.33x" in table


def test_fail_outcome_rendered(tmp_path):
    planted = oracle_source(slowdown={"in_dist": 1.0}, corrupt=["other"])
    path = _sweep_log(tmp_path, "b", "hmc", [planted], 1)
    log = report.load_run_log(path)
    table = report.render_table(report.summary_rows([log]))
    assert "FAIL" in table


def test_silent_regression_tag_rendered(tmp_path):
    planted = oracle_source(slowdown={"in_dist": 1.0, "other": 13.0})
    path = _sweep_log(tmp_path, "c", "fft3d", [planted], 1)
    log = report.load_run_log(path)
    table = report.render_table(report.summary_rows([log]))
    assert "silent regression" in table


def test_mixed_profiles_flagged(tmp_path):
    path = _sweep_log(tmp_path, "d", "saxpy", [oracle_source(slowdown=1.5)], 1)
    log_a = report.load_run_log(path)
    log_b = json.loads(json.dumps(log_a))  # deep copy
    log_b["header"]["profile"] = "paper"
    table = report.render_table(report.summary_rows([log_a, log_b]))
    assert "WARNING" in table and "profiles" in table


def test_convergence_csv_and_figure(tmp_path):
    path = _sweep_log(
        tmp_path,
        "e",
        "lbm",
        [oracle_source(slowdown=1.9), "{{{", oracle_source(slowdown=1.4)],
        3,
    )
    log = report.load_run_log(path)
    csv_path = tmp_path / "conv.csv"
    report.write_convergence_csv(log, csv_path)
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "iteration,kind,promoted,best_score,best_over_seed"
    assert len(lines) == 5  # header + iterations 0..3
    # best-over-seed series is non-decreasing and starts at 1
    series = [float(l.split(",")[-1]) for l in lines[1:]]
    assert series[0] == pytest.approx(1.0)
    assert series == sorted(series)
    png = tmp_path / "conv.png"
    report.render_convergence_figure([log], png)
    assert png.stat().st_size > 0


def test_format_fraction_round_trips_phi_example():
    # a held-out gate value of 0.085 renders as 8.5%
    from kernelsweep.roofline import held_out_score

    assert report.format_fraction(held_out_score(1, 0.085)) == "8.5%"

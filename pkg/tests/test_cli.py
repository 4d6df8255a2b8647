"""CLI surface: validate, run, report, tasks; exit codes and emitted files."""

import json

import pytest

from kernelsweep.backend.oracle import oracle_source
from kernelsweep.cli import main


def _scripts(tmp_path, sources):
    d = tmp_path / "scripts"
    d.mkdir()
    for i, s in enumerate(sources):
        (d / f"{i:02d}.json").write_text(s)
    return d


def test_validate_single_task(capsys):
    rc = main(["validate", "--task", "saxpy"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "saxpy" in out and "1/1 seeds pass" in out


def test_validate_reports_corrupted_seed(tmp_path, capsys):
    import shutil
    from kernelsweep.tasks.registry import default_seed_dir

    seed_dir = tmp_path / "seeds"
    shutil.copytree(default_seed_dir(), seed_dir)
    (seed_dir / "saxpy.c").write_text("int broken(void) { return }")
    rc = main(["validate", "--task", "saxpy", "--seed-dir", str(seed_dir)])
    out = capsys.readouterr().out
    assert rc == 1
    assert "FAIL" in out and "0/1 seeds pass" in out


def test_run_oracle_scripted_sweep_and_emit_convergence(tmp_path, capsys):
    scripts = _scripts(
        tmp_path, [oracle_source(slowdown=1.5), oracle_source(slowdown=1.2)]
    )
    out_dir = tmp_path / "out"
    rc = main(
        [
            "run",
            "--task",
            "heat2d",
            "--backend",
            "oracle",
            "--mutator",
            "scripted",
            "--script-dir",
            str(scripts),
            "--iters",
            "2",
            "--out",
            str(out_dir),
            "--emit",
            "convergence",
        ]
    )
    printed = capsys.readouterr().out
    assert rc == 0
    assert "heat2d" in printed and "outcome" in printed
    assert (out_dir / "run.jsonl").is_file()
    assert (out_dir / "convergence.csv").is_file()
    assert (out_dir / "convergence.png").is_file()


def test_run_exit_code_two_on_held_out_fail(tmp_path, capsys):
    planted = oracle_source(slowdown={"in_dist": 1.0}, corrupt=["other"])
    scripts = _scripts(tmp_path, [planted])
    rc = main(
        [
            "run",
            "--task",
            "hmc",
            "--backend",
            "oracle",
            "--mutator",
            "scripted",
            "--script-dir",
            str(scripts),
            "--iters",
            "1",
            "--out",
            str(tmp_path / "out"),
        ]
    )
    assert rc == 2
    assert "FAIL" in capsys.readouterr().out


def test_run_missing_mutator_is_config_error(capsys):
    rc = main(["run", "--task", "saxpy", "--backend", "oracle"])
    assert rc == 1
    assert "configuration error" in capsys.readouterr().err


def test_run_missing_api_key_fails_before_iterations(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("KS_LLM_API_KEY", raising=False)
    rc = main(
        [
            "run",
            "--task",
            "saxpy",
            "--backend",
            "oracle",
            "--mutator",
            "http",
            "--model",
            "m",
            "--endpoint",
            "http://localhost:9/v1",
        ]
    )
    assert rc == 1
    assert "KS_LLM_API_KEY" in capsys.readouterr().err


def test_report_aggregates_and_writes_artifacts(tmp_path, capsys):
    scripts = _scripts(tmp_path, [oracle_source(slowdown={"in_dist": 1.0, "other": 13.0})])
    out_dir = tmp_path / "out"
    main(
        [
            "run",
            "--task",
            "fft3d",
            "--backend",
            "oracle",
            "--mutator",
            "scripted",
            "--script-dir",
            str(scripts),
            "--iters",
            "1",
            "--out",
            str(out_dir),
        ]
    )
    capsys.readouterr()
    rep_dir = tmp_path / "rep"
    rc = main(["report", str(out_dir / "run.jsonl"), "--out-dir", str(rep_dir)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "silent regression" in out
    assert (rep_dir / "summary.json").is_file()
    assert (rep_dir / "convergence.png").is_file()
    rows = json.loads((rep_dir / "summary.json").read_text())
    assert rows[0]["outcome"] == "silent regression"


def test_report_bad_path_is_error(capsys):
    rc = main(["report", "/nonexistent/run.jsonl"])
    assert rc == 1


def test_tasks_dump_is_versioned_json(capsys):
    rc = main(["tasks"])
    doc = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert doc["version"] == 1
    assert set(doc["tasks"]) == {
        "saxpy", "heat2d", "wave3d", "nbody", "hmc", "lbm", "ising", "lj", "gradshaf", "fft3d",
    }
    assert doc["tasks"]["fft3d"]["verification"]["kind"] == "relative_max_norm"
    assert doc["tasks"]["heat2d"]["sizes"]["desk"]["held_out"] == 192


def test_config_file_supplies_defaults(tmp_path, capsys):
    scripts = _scripts(tmp_path, [oracle_source(slowdown=1.5)])
    cfg = tmp_path / "ks.cfg"
    cfg.write_text(f"backend = oracle\nmutator = scripted\nscript_dir = {scripts}\n# comment\n")
    rc = main(
        ["run", "--task", "saxpy", "--iters", "1", "--config", str(cfg), "--out", str(tmp_path / "o")]
    )
    assert rc == 0
    assert "saxpy" in capsys.readouterr().out

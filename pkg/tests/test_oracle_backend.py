"""Oracle backend: reference outputs, synthetic timing, planted behaviors."""

import pytest

from kernelsweep import tasks
from kernelsweep.backend import BackendRunError, Candidate
from kernelsweep.backend.oracle import ORACLE_SEED_SOURCE, OracleBackend, oracle_source
from kernelsweep.roofline import ChipPeaks

CHIP = ChipPeaks("test-chip", 4500.0, 200.0)


@pytest.fixture()
def backend():
    return OracleBackend(CHIP)


def test_outputs_byte_equal_reference(backend, desk_tasks):
    task = desk_tasks["heat2d"]
    size = task.in_dist[0]
    co = backend.compile(Candidate(ORACLE_SEED_SOURCE, dialect="oracle"))
    out = backend.run(co, task, size, seed=3)
    ref = tasks.reference_outputs(task, size, 3)
    assert all(a.byte_equal(b) for a, b in zip(out.outputs, ref))


def test_slowdown_one_hits_nominal_fraction(backend, desk_tasks):
    from kernelsweep import roofline

    task = desk_tasks["lbm"]
    size = task.in_dist[1]
    co = backend.compile(Candidate(oracle_source(slowdown=1.0), dialect="oracle"))
    out = backend.run(co, task, size, seed=1)
    frac = roofline.achieved(task, size, out.timing.median_seconds) / roofline.ceiling(
        task, size, CHIP
    )
    assert frac == pytest.approx(backend.nominal_fraction, rel=1e-9)


def test_per_size_and_other_selectors(backend, desk_tasks):
    task = desk_tasks["fft3d"]
    src = oracle_source(slowdown={"0": 2.0, "in_dist": 4.0, "other": 13.0})
    co = backend.compile(Candidate(src, dialect="oracle"))
    t0 = backend.run(co, task, task.in_dist[0], 1).timing.median_seconds
    t1 = backend.run(co, task, task.in_dist[1], 1).timing.median_seconds
    th = backend.run(co, task, task.held_out, 1).timing.median_seconds
    assert t0 == pytest.approx(backend.model_elapsed(task, task.in_dist[0], 2.0))
    assert t1 == pytest.approx(backend.model_elapsed(task, task.in_dist[1], 4.0))
    assert th == pytest.approx(backend.model_elapsed(task, task.held_out, 13.0))


def test_corrupt_other_fails_verification_only_at_held_out(backend, desk_tasks):
    task = desk_tasks["hmc"]
    src = oracle_source(slowdown=1.0, corrupt=["other"])
    co = backend.compile(Candidate(src, dialect="oracle"))
    for size in task.in_dist:
        out = backend.run(co, task, size, 5)
        passed, _, _ = tasks.verify(task, size, out.outputs, tasks.reference_outputs(task, size, 5))
        assert passed == 1
    held = backend.run(co, task, task.held_out, 5)
    passed, _, detail = tasks.verify(
        task, task.held_out, held.outputs, tasks.reference_outputs(task, task.held_out, 5)
    )
    assert passed == 0
    assert "covariance" in detail


def test_directive_parse_error_is_compile_fail(backend):
    co = backend.compile(Candidate("this is not json {{{", dialect="oracle"))
    assert not co.ok
    assert "oracle dialect error" in co.diagnostics


def test_unknown_directive_key_rejected(backend):
    co = backend.compile(Candidate('{"speedup": 2}', dialect="oracle"))
    assert not co.ok


def test_slowdown_below_one_rejected(backend):
    co = backend.compile(Candidate('{"slowdown": {"default": 0.5}}', dialect="oracle"))
    assert not co.ok
    assert ">= 1" in co.diagnostics


def test_planted_run_failure(backend, desk_tasks):
    task = desk_tasks["saxpy"]
    co = backend.compile(Candidate(oracle_source(fail="run"), dialect="oracle"))
    with pytest.raises(BackendRunError):
        backend.run(co, task, task.in_dist[0], 1)


def test_instrumentation_records_runs(backend, desk_tasks):
    task = desk_tasks["saxpy"]
    co = backend.compile(Candidate(ORACLE_SEED_SOURCE, dialect="oracle"))
    backend.run(co, task, task.in_dist[0], 1, purpose="search")
    backend.run(co, task, task.held_out, 1, purpose="held_out_eval")
    assert len(backend.runs) == 2
    assert backend.held_out_runs(task)[0].purpose == "held_out_eval"
    assert backend.runs[0].warmup == 3 and backend.runs[0].timed == 10


def test_determinism_across_instances(desk_tasks):
    task = desk_tasks["gradshaf"]
    a = OracleBackend(CHIP)
    b = OracleBackend(CHIP)
    co_a = a.compile(Candidate(ORACLE_SEED_SOURCE, dialect="oracle"))
    co_b = b.compile(Candidate(ORACLE_SEED_SOURCE, dialect="oracle"))
    ra = a.run(co_a, task, task.in_dist[2], 9)
    rb = b.run(co_b, task, task.in_dist[2], 9)
    assert ra.timing.median_seconds == rb.timing.median_seconds
    assert all(x.byte_equal(y) for x, y in zip(ra.outputs, rb.outputs))

"""Native backend failure modes, exercised with planted C candidates."""

import numpy as np
import pytest

from kernelsweep import tasks
from kernelsweep.backend import BackendRunError, Candidate
from kernelsweep.backend.native import NativeBackend
from kernelsweep.evolve import evaluate
from kernelsweep.roofline import ChipPeaks

CHIP = ChipPeaks("test-chip", 4500.0, 200.0)

SYNTAX_ERROR = """
#include "ks_abi.h"
int32_t saxpy_pass(ks_descriptor *d) { this is not C }
"""

WRONG_SYMBOL = """
#include "ks_abi.h"
int32_t saxpy_wrong_name(ks_descriptor *d) { (void)d; return 0; }
"""

NO_HEADER = """
#include <stdint.h>
typedef struct { uint64_t seed; } fake;
int32_t saxpy_pass(fake *d) { (void)d; return 0; }
"""

NAN_WAVE3D = """
#include "ks_abi.h"
int32_t wave3d_run(ks_descriptor *d) {
    float *next = (float *)d->buf[2];
    float *cur = (float *)d->buf[1];
    (void)cur;
    for (uint64_t i = 0; i < d->buf_len[2]; ++i)
        next[i] = 0.0f / 0.0f;
    /* also poison the contract slots */
    float *b0 = (float *)d->buf[0];
    float *b1 = (float *)d->buf[1];
    for (uint64_t i = 0; i < d->buf_len[0]; ++i) { b0[i] = next[i]; b1[i] = next[i]; }
    return 0;
}
"""

INFINITE_LOOP = """
#include "ks_abi.h"
int32_t saxpy_pass(ks_descriptor *d) {
    volatile uint64_t spin = 0;
    while (d->steps > 0) { spin += 1; }
    return (int32_t)spin;
}
"""

NONZERO_RETURN = """
#include "ks_abi.h"
int32_t saxpy_pass(ks_descriptor *d) { (void)d; return 7; }
"""

SEGFAULT = """
#include "ks_abi.h"
int32_t saxpy_pass(ks_descriptor *d) {
    float *p = (float *)d->buf[0];
    return (int32_t)p[(uint64_t)1 << 60];
}
"""


@pytest.fixture(scope="module")
def backend():
    return NativeBackend()


@pytest.fixture(scope="module")
def saxpy_task():
    return tasks.build_task("saxpy", "desk", load_seed=True)


def test_seed_compiles_and_scores(backend, saxpy_task):
    r = evaluate(Candidate(saxpy_task.seed_source), saxpy_task, backend, CHIP, 1)
    assert r.kind == "scored"


def test_syntax_error_surfaces_compiler_diagnostics(backend, saxpy_task):
    r = evaluate(Candidate(SYNTAX_ERROR), saxpy_task, backend, CHIP, 1)
    assert r.kind == "compile_fail"
    assert "error" in r.diagnostics.lower()


def test_wrong_entry_symbol_is_load_time_run_fail(backend, saxpy_task):
    co = backend.compile(Candidate(WRONG_SYMBOL))
    assert co.ok  # compiles fine
    r = evaluate(Candidate(WRONG_SYMBOL), saxpy_task, backend, CHIP, 1)
    assert r.kind == "run_fail"
    assert "saxpy_pass" in r.diagnostics


def test_missing_abi_header_refused(backend, saxpy_task):
    r = evaluate(Candidate(NO_HEADER), saxpy_task, backend, CHIP, 1)
    assert r.kind == "run_fail"
    assert "ks_abi_version" in r.diagnostics


def test_bumped_abi_version_refused(backend, saxpy_task, tmp_path):
    bumped = (
        "#include <stdint.h>\n"
        "uint32_t ks_abi_version(void) { return 999u; }\n"
        "typedef struct { uint64_t seed; } ks_descriptor;\n"
        "int32_t saxpy_pass(ks_descriptor *d) { (void)d; return 0; }\n"
    )
    r = evaluate(Candidate(bumped), saxpy_task, backend, CHIP, 1)
    assert r.kind == "run_fail"
    assert "version" in r.diagnostics.lower()


def test_nan_candidate_fails_at_first_size(backend):
    task = tasks.build_task("wave3d", "desk", load_seed=True)
    r = evaluate(Candidate(NAN_WAVE3D), task, backend, CHIP, 1)
    assert r.kind == "correct_fail"
    assert r.violating_size == task.in_dist[0].label
    assert "non-finite" in r.detail


def test_candidate_error_code_is_run_fail(backend, saxpy_task):
    r = evaluate(Candidate(NONZERO_RETURN), saxpy_task, backend, CHIP, 1)
    assert r.kind == "run_fail"
    assert "error code 7" in r.diagnostics


def test_crashing_candidate_contained_under_subprocess_isolation(saxpy_task):
    # in-process mode documents a crash-the-harness risk; the isolation flag
    # must convert a candidate segfault into a structured run failure
    backend = NativeBackend(subprocess_isolation=True)
    r = evaluate(Candidate(SEGFAULT), saxpy_task, backend, CHIP, 1)
    assert r.kind == "run_fail"
    assert "subprocess failed" in r.diagnostics


def test_watchdog_aborts_runaway_candidate(saxpy_task):
    # subprocess isolation so the spinning candidate is killed, not leaked
    backend = NativeBackend(watchdog_seconds=2.0, subprocess_isolation=True)
    r = evaluate(Candidate(INFINITE_LOOP), saxpy_task, backend, CHIP, 1)
    assert r.kind == "run_fail"
    assert "watchdog timeout" in r.diagnostics


def test_subprocess_isolation_matches_in_process_outputs(saxpy_task):
    inproc = NativeBackend()
    isolated = NativeBackend(subprocess_isolation=True)
    cand = Candidate(saxpy_task.seed_source)
    size = saxpy_task.in_dist[0]
    inputs = tasks.generate_input(saxpy_task, size, 1)
    co_a = inproc.compile(cand)
    co_b = isolated.compile(cand)
    out_a = inproc.run(co_a, saxpy_task, size, 1, inputs)
    out_b = isolated.run(co_b, saxpy_task, size, 1, [b.copy() for b in inputs])
    assert all(x.byte_equal(y) for x, y in zip(out_a.outputs, out_b.outputs))


def test_compile_timeout_reported(saxpy_task):
    backend = NativeBackend(compile_timeout=0.01)
    co = backend.compile(Candidate(saxpy_task.seed_source))
    assert not co.ok
    assert co.diagnostics == "compile timeout"


SLOW_SAXPY = """
#include "ks_abi.h"
int32_t saxpy_pass(ks_descriptor *d) {
    const float *x = (const float *)d->buf[0];
    const float *y = (const float *)d->buf[1];
    float *out = (float *)d->buf[2];
    float a = d->consts[0];
    uint64_t n = d->buf_len[0];
    /* correct but deliberately redundant: recompute every element 8 times */
    for (int pass = 0; pass < 8; ++pass)
        for (uint64_t i = 0; i < n; ++i)
            out[i] = a * x[i] + y[i];
    return 0;
}
"""


def test_full_sweep_on_native_backend(backend, saxpy_task, tmp_path):
    # a correct-but-much-slower candidate never promotes; a broken source
    # consumes its iteration; the held-out verdict lands on the seed
    from kernelsweep.evolve import run_sweep
    from kernelsweep.mutators import ScriptedMutator

    d = tmp_path / "scripts"
    d.mkdir()
    (d / "00.c").write_text(SLOW_SAXPY)
    (d / "01.c").write_text(SYNTAX_ERROR)
    log = run_sweep(saxpy_task, ScriptedMutator(d), 2, backend, CHIP, seed=1)
    kinds = [r.kind for r in log.records]
    assert kinds[0] == "scored" and kinds[1] == "scored" and kinds[2] == "compile_fail"
    assert not any(r.promoted for r in log.records)
    assert log.final["incumbent_hash"] == Candidate(saxpy_task.seed_source).hash
    assert log.final["held_out_passed"] == 1


def test_repetition_isolation(backend):
    # two runs of the same artifact on the same inputs verify identically
    task = tasks.build_task("ising", "desk", load_seed=True)
    size = task.in_dist[0]
    cand = Candidate(task.seed_source)
    co = backend.compile(cand)
    inputs = tasks.generate_input(task, size, 2)
    a = backend.run(co, task, size, 2, [b.copy() for b in inputs])
    b = backend.run(co, task, size, 2, [b.copy() for b in inputs])
    assert all(x.byte_equal(y) for x, y in zip(a.outputs, b.outputs))

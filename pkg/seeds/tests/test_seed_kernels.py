"""Seed-kernel suite: every seed satisfies its task's verification rule,
compiles warning-clean, and honors the ABI version handshake."""

import os
import shutil
import subprocess
from pathlib import Path

import pytest

from kernelsweep import tasks
from kernelsweep.backend import BackendRunError, Candidate
from kernelsweep.backend.native import NativeBackend, run_artifact_in_process
from kernelsweep.evolve import evaluate
from kernelsweep.roofline import load_chip_registry

SEED_DIR = Path(__file__).resolve().parents[1]
CHIP = load_chip_registry()["m1pro"]

paper_profile = pytest.mark.paper_profile
skip_unless_nightly = pytest.mark.skipif(
    not os.environ.get("KS_PAPER_PROFILE"),
    reason="paper-profile sizes run nightly (set KS_PAPER_PROFILE=1)",
)


@pytest.fixture(scope="module")
def backend():
    return NativeBackend(header_path=SEED_DIR / "ks_abi.h")


@pytest.mark.parametrize("task_id", tasks.TASK_IDS)
def test_seed_passes_verification_at_desk_profile(task_id, backend):
    task = tasks.build_task(task_id, "desk", seed_dir=SEED_DIR, load_seed=True)
    result = evaluate(Candidate(task.seed_source, origin="seed"), task, backend, CHIP, seed=1)
    assert result.kind == "scored", result.diagnostics or result.detail
    assert all(s.passed for s in result.per_size)


@pytest.mark.parametrize("task_id", tasks.TASK_IDS)
def test_seed_passes_held_out_at_desk_profile(task_id, backend):
    task = tasks.build_task(task_id, "desk", seed_dir=SEED_DIR, load_seed=True)
    co = backend.compile(Candidate(task.seed_source))
    size = task.held_out
    inputs = tasks.generate_input(task, size, 1)
    out = backend.run(co, task, size, 1, inputs)
    passed, _, detail = tasks.verify(task, size, out.outputs, tasks.reference_outputs(task, size, 1))
    assert passed == 1, detail


@paper_profile
@skip_unless_nightly
@pytest.mark.parametrize("task_id", tasks.TASK_IDS)
def test_seed_passes_verification_at_paper_profile(task_id, backend):
    task = tasks.build_task(task_id, "paper", seed_dir=SEED_DIR, load_seed=True)
    result = evaluate(Candidate(task.seed_source, origin="seed"), task, backend, CHIP, seed=1)
    assert result.kind == "scored", result.diagnostics or result.detail


@pytest.mark.parametrize("task_id", tasks.TASK_IDS)
def test_seed_compiles_warning_clean(task_id, tmp_path):
    src = SEED_DIR / f"{task_id}.c"
    out = tmp_path / f"{task_id}.so"
    cmd = [
        "cc", "-std=c11", "-O3", "-Wall", "-Wextra", "-Werror",
        "-shared", "-fPIC", "-I", str(SEED_DIR), "-o", str(out), str(src), "-lm",
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stderr.strip() == ""


def test_bumped_abi_version_refused_with_structured_error(tmp_path):
    bumped_dir = tmp_path / "bumped"
    bumped_dir.mkdir()
    header = (SEED_DIR / "ks_abi.h").read_text()
    bumped = header.replace("#define KS_ABI_VERSION 1u", "#define KS_ABI_VERSION 2u")
    (bumped_dir / "ks_abi.h").write_text(bumped)
    shutil.copy(SEED_DIR / "saxpy.c", bumped_dir / "saxpy.c")
    out = bumped_dir / "saxpy.so"
    subprocess.run(
        ["cc", "-O3", "-shared", "-fPIC", "-I", str(bumped_dir), "-o", str(out),
         str(bumped_dir / "saxpy.c"), "-lm"],
        check=True, capture_output=True,
    )
    task = tasks.build_task("saxpy", "desk", seed_dir=SEED_DIR, load_seed=True)
    size = task.in_dist[0]
    inputs = tasks.generate_input(task, size, 1)
    with pytest.raises(BackendRunError, match="version"):
        run_artifact_in_process(str(out), task, size, 1, inputs, watchdog_seconds=None)


def test_harness_startup_rejects_mismatched_header(tmp_path):
    from kernelsweep.backend.native import ToolchainError

    bumped = (SEED_DIR / "ks_abi.h").read_text().replace(
        "#define KS_ABI_VERSION 1u", "#define KS_ABI_VERSION 7u"
    )
    path = tmp_path / "ks_abi.h"
    path.write_text(bumped)
    with pytest.raises(ToolchainError, match="version"):
        NativeBackend(header_path=path)

"""Benchmark task definitions: references, inputs, sizes, verification."""

from __future__ import annotations

from ..buffers import FieldBuffer
from .fft3d import reference_fft3d
from .gradshaf import reference_gradshaf
from .hmc import reference_hmc
from .inputs import OUTPUT_BUFFERS, UnsupportedSizeError, generate_input, lj_box_edge
from .ising import reference_ising
from .lbm import reference_lbm
from .lj import reference_lj
from .nbody import reference_nbody
from .registry import (
    PROFILES,
    all_tasks,
    build_task,
    export_registry,
    export_registry_json,
    iteration_budget,
    load_seed_source,
)
from .stencils import reference_heat2d, reference_saxpy, reference_wave3d
from .types import TASK_IDS, SizeConfig, TaskSpec, VerificationRule
from .verify import verify

__all__ = [
    "TASK_IDS",
    "PROFILES",
    "SizeConfig",
    "TaskSpec",
    "VerificationRule",
    "all_tasks",
    "build_task",
    "compute_reference",
    "export_registry",
    "export_registry_json",
    "generate_input",
    "iteration_budget",
    "load_seed_source",
    "lj_box_edge",
    "OUTPUT_BUFFERS",
    "UnsupportedSizeError",
    "reference_outputs",
    "verify",
]


def compute_reference(task: TaskSpec, size: SizeConfig, seed: int) -> list[FieldBuffer]:
    """Run the task's reference implementation on generated inputs.

    Returns the output buffers in OUTPUT_BUFFERS order for the task.
    """
    bufs = generate_input(task, size, seed)
    c = task.constants
    steps = size.steps
    if task.id == "saxpy":
        return [reference_saxpy(c["a"], bufs[0], bufs[1])]
    if task.id == "heat2d":
        return [reference_heat2d(bufs[0], c["alpha"], steps)]
    if task.id == "wave3d":
        prev, cur = reference_wave3d(bufs[0], bufs[1], c["alpha"], steps)
        return [prev, cur]
    if task.id == "nbody":
        pos, vel = reference_nbody(bufs[0], bufs[1], bufs[2], c["G"], c["eps"], c["dt"], steps)
        return [pos, vel]
    if task.id == "hmc":
        samples = reference_hmc(
            bufs[0], bufs[1], c["eps"], int(c["L"]), size.param("K"), steps, seed
        )
        return [samples]
    if task.id == "lbm":
        return [reference_lbm(bufs[0], c["tau"], steps)]
    if task.id == "ising":
        return [reference_ising(bufs[0], c["beta"], c["J"], steps, seed)]
    if task.id == "lj":
        box = lj_box_edge(task, size)
        pos, vel = reference_lj(
            bufs[0], bufs[1], box, c["dt"], c["r_cut"], steps, int(c["cell_capacity"])
        )
        return [pos, vel]
    if task.id == "gradshaf":
        return [
            reference_gradshaf(
                bufs[0],
                c["omega"],
                c["mu0"],
                c["p_axis"],
                steps,
                c["r_min"],
                c["r_max"],
                c["z_min"],
                c["z_max"],
            )
        ]
    if task.id == "fft3d":
        return [reference_fft3d(bufs[0])]
    raise UnsupportedSizeError(f"unknown task {task.id!r}")


_REFERENCE_CACHE: dict = {}


def reference_outputs(task: TaskSpec, size: SizeConfig, seed: int) -> list[FieldBuffer]:
    """Cached reference outputs; constants are fixed per task id, so the key
    is (task, profile, size, seed)."""
    key = (task.id, task.profile, size.label, size.steps, int(seed))
    if key not in _REFERENCE_CACHE:
        _REFERENCE_CACHE[key] = compute_reference(task, size, seed)
    return [b.copy() for b in _REFERENCE_CACHE[key]]

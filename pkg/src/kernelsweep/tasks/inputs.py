"""Deterministic input generation for every task.

generate_input returns the full per-task buffer list in the frozen backend
order (state buffers first, scratch/output buffers after), so the same list
feeds both the reference ops and a compiled candidate.  Identical
(task, size, seed) triples yield byte-identical buffers.
"""

from __future__ import annotations

import numpy as np

from .. import prng
from ..buffers import FieldBuffer, make_buffer, zeros
from . import lj as lj_mod
from .hmc import target_matrix
from .lbm import WEIGHTS
from .types import SizeConfig, TaskSpec


class UnsupportedSizeError(ValueError):
    """Size parameters do not match the task's schema."""


PARAM_SCHEMA = {
    "saxpy": ("n",),
    "heat2d": ("N",),
    "wave3d": ("N",),
    "nbody": ("N",),
    "hmc": ("d", "K"),
    "lbm": ("N",),
    "ising": ("N",),
    "lj": ("N",),
    "gradshaf": ("N",),
    "fft3d": ("N",),
}

# Buffer indices holding task outputs, in the order the reference ops return them.
OUTPUT_BUFFERS = {
    "saxpy": (2,),
    "heat2d": (0,),
    "wave3d": (0, 1),
    "nbody": (0, 1),
    "hmc": (1,),
    "lbm": (0,),
    "ising": (0,),
    "lj": (0, 1),
    "gradshaf": (0,),
    "fft3d": (0,),
}


def _check_schema(task_id: str, size: SizeConfig):
    names = tuple(k for k, _ in size.params)
    if size.task_id != task_id or names != PARAM_SCHEMA[task_id]:
        raise UnsupportedSizeError(
            f"size {size.label!r} does not fit task {task_id} (expects params {PARAM_SCHEMA[task_id]})"
        )


def _uniform_f32(seed, stream, count, lo, hi):
    u = prng.uniform(seed, stream, count)
    return (lo + (hi - lo) * u).astype(np.float32)


def generate_input(task: TaskSpec, size: SizeConfig, seed: int) -> list[FieldBuffer]:
    """Build the task's buffer list for one size; deterministic in (task, size, seed)."""
    _check_schema(task.id, size)
    c = task.constants
    if task.id == "saxpy":
        n = size.param("n")
        x = make_buffer("f32", (n,), _uniform_f32(seed, prng.STREAM_INPUT_PRIMARY, n, -1.0, 1.0))
        y = make_buffer("f32", (n,), _uniform_f32(seed, prng.STREAM_INPUT_SECONDARY, n, -1.0, 1.0))
        return [x, y, zeros("f32", (n,))]

    if task.id == "heat2d":
        n = size.param("N")
        u = _uniform_f32(seed, prng.STREAM_INPUT_PRIMARY, n * n, 0.0, 1.0).reshape(n, n)
        return [make_buffer("f32", (n, n), u), zeros("f32", (n, n))]

    if task.id == "wave3d":
        n = size.param("N")
        u = _uniform_f32(seed, prng.STREAM_INPUT_PRIMARY, n**3, -0.5, 0.5).reshape(n, n, n)
        cur = make_buffer("f32", (n, n, n), u)
        return [cur.copy(), cur, zeros("f32", (n, n, n))]

    if task.id == "nbody":
        n = size.param("N")
        pos = _uniform_f32(seed, prng.STREAM_INPUT_PRIMARY, 3 * n, -1.0, 1.0).reshape(n, 3)
        vel = _uniform_f32(seed, prng.STREAM_INPUT_SECONDARY, 3 * n, -0.01, 0.01).reshape(n, 3)
        mass = _uniform_f32(seed, prng.STREAM_INPUT_TERTIARY, n, 0.5, 1.5)
        return [
            make_buffer("f32", (n, 3), pos),
            make_buffer("f32", (n, 3), vel),
            make_buffer("f32", (n,), mass),
            zeros("f32", (n, 3)),
        ]

    if task.id == "hmc":
        d, k = size.param("d"), size.param("K")
        a = target_matrix(d, c.get("eig_min", 1.0), c.get("eig_max", 100.0))
        q0 = prng.normal(seed, prng.STREAM_INPUT_PRIMARY, k * d).reshape(k, d)
        return [
            make_buffer("f32", (d, d), a),
            make_buffer("f32", (k, d), q0),
            zeros("f32", (k, d)),
            zeros("f32", (k, d)),
        ]

    if task.id == "lbm":
        n = size.param("N")
        noise = _uniform_f32(seed, prng.STREAM_INPUT_PRIMARY, 9 * n * n, -1.0, 1.0)
        f = np.empty((9, n, n), dtype=np.float32)
        flat = noise.reshape(9, n, n)
        for k in range(9):
            f[k] = np.float32(WEIGHTS[k]) * (1.0 + np.float32(0.05) * flat[k])
        return [make_buffer("f32", (9, n, n), f), zeros("f32", (9, n, n))]

    if task.id == "ising":
        n = size.param("N")
        u = prng.uniform(seed, prng.STREAM_INPUT_PRIMARY, n * n)
        spins = np.where(u < 0.5, -1, 1).astype(np.int8).reshape(n, n)
        return [make_buffer("i8", (n, n), spins)]

    if task.id == "lj":
        n = size.param("N")
        density = c.get("density", 0.8)
        jitter = c.get("jitter", 0.05)
        m, a, box = lj_mod.lattice_geometry(n, density)
        grid = np.arange(m, dtype=np.float64)
        zz, yy, xx = np.meshgrid(grid, grid, grid, indexing="ij")
        lattice = np.stack(
            [xx.ravel(), yy.ravel(), zz.ravel()], axis=1
        )[:n] * a + 0.5 * a
        disp = _uniform_f32(seed, prng.STREAM_INPUT_PRIMARY, 3 * n, -jitter, jitter).reshape(n, 3)
        pos = (lattice + disp.astype(np.float64) * a).astype(np.float32)
        vel = _uniform_f32(seed, prng.STREAM_INPUT_SECONDARY, 3 * n, -0.1, 0.1).reshape(n, 3)
        cap = int(c.get("cell_capacity", 64))
        try:
            mc = lj_mod.cell_grid(box, c.get("r_cut", 2.5))
        except ValueError:
            mc = 1  # box too small to run forces; generation itself is still valid
        return [
            make_buffer("f32", (n, 3), pos),
            make_buffer("f32", (n, 3), vel),
            zeros("u32", (mc * mc * mc,)),
            zeros("u32", (mc * mc * mc * cap,)),
            zeros("f32", (n, 3)),  # per-particle force scratch
        ]

    if task.id == "gradshaf":
        n = size.param("N")
        r = np.linspace(c.get("r_min", 1.0), c.get("r_max", 2.0), n)
        z = np.linspace(c.get("z_min", -0.5), c.get("z_max", 0.5), n)
        bump = np.sin(np.pi * (r - r[0]) / (r[-1] - r[0]))[np.newaxis, :] * np.cos(
            np.pi * z / (z[-1] - z[0])
        )[:, np.newaxis]
        noise = _uniform_f32(seed, prng.STREAM_INPUT_PRIMARY, n * n, 0.0, 1.0).reshape(n, n)
        psi = (bump * (1.0 + 0.1 * noise.astype(np.float64))).astype(np.float32)
        psi[0, :] = 0.0
        psi[-1, :] = 0.0
        psi[:, 0] = 0.0
        psi[:, -1] = 0.0
        return [make_buffer("f32", (n, n), psi), zeros("f32", (n, n)), zeros("f32", (1,))]

    if task.id == "fft3d":
        n = size.param("N")
        vals = prng.normal(seed, prng.STREAM_INPUT_PRIMARY, 2 * n**3)
        grid = (vals[0::2] + 1j * vals[1::2]).astype(np.complex64).reshape(n, n, n)
        return [make_buffer("c64_pair", (n, n, n), grid), zeros("c64_pair", (n, n, n))]

    raise UnsupportedSizeError(f"unknown task {task.id!r}")


def lj_box_edge(task: TaskSpec, size: SizeConfig) -> float:
    _, _, box = lj_mod.lattice_geometry(size.param("N"), task.constants.get("density", 0.8))
    return box

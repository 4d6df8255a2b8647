"""All-pairs gravitational N-body with softened interactions and kick-drift updates."""

from __future__ import annotations

import numpy as np

from ..buffers import FieldBuffer, make_buffer


def accelerations(pos: np.ndarray, mass: np.ndarray, g: float, eps: float) -> np.ndarray:
    """Softened all-pairs accelerations in fp64.

    The j == i term is kept: its numerator is exactly zero and the softening
    keeps the denominator finite, so it contributes nothing.
    """
    d = pos[np.newaxis, :, :] - pos[:, np.newaxis, :]  # d[i, j] = r_j - r_i
    r2 = d[:, :, 0] ** 2 + d[:, :, 1] ** 2 + d[:, :, 2] ** 2 + eps * eps
    inv = r2 ** (-1.5)
    w = mass[np.newaxis, :] * inv
    return g * np.sum(w[:, :, np.newaxis] * d, axis=1)


def reference_nbody(
    pos: FieldBuffer,
    vel: FieldBuffer,
    mass: FieldBuffer,
    g: float,
    eps: float,
    dt: float,
    steps: int,
) -> tuple[FieldBuffer, FieldBuffer]:
    if eps == 0.0:
        raise ValueError("nbody softening eps must be nonzero")
    r = pos.data.astype(np.float64)
    v = vel.data.astype(np.float64)
    m = mass.data.astype(np.float64)
    g64 = float(np.float32(g))
    eps64 = float(np.float32(eps))
    dt64 = float(np.float32(dt))
    for _ in range(steps):
        a = accelerations(r, m, g64, eps64)
        v = v + a * dt64
        r = r + v * dt64
        r = r.astype(np.float32).astype(np.float64)
        v = v.astype(np.float32).astype(np.float64)
    return (
        make_buffer("f32", pos.extents, r),
        make_buffer("f32", vel.extents, v),
    )

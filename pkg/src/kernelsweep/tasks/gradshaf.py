"""Grad-Shafranov fixed-boundary equilibrium via Picard iteration.

Each outer step chains an interior max-reduction with a variable-coefficient
5-point stencil and a nonlinear source that switches off outside the
normalized flux interval (0, 1).
"""

from __future__ import annotations

import numpy as np

from ..buffers import FieldBuffer, make_buffer


class DegenerateFieldError(RuntimeError):
    """Interior maximum of the flux dropped to or below zero."""


def radial_coords(nr: int, r_min: float = 1.0, r_max: float = 2.0) -> np.ndarray:
    return np.linspace(r_min, r_max, nr)


def reference_gradshaf(
    psi: FieldBuffer,
    omega: float,
    mu0: float,
    p_axis: float,
    picard_steps: int,
    r_min: float = 1.0,
    r_max: float = 2.0,
    z_min: float = -0.5,
    z_max: float = 0.5,
) -> FieldBuffer:
    """Relax the flux grid for `picard_steps` outer iterations; boundary untouched.

    Grid layout is [Nz][Nr] row-major with R along the fast axis; R must stay
    strictly positive.
    """
    nz, nr = psi.extents
    if nz < 3 or nr < 3:
        raise ValueError("gradshaf grid must be at least 3x3")
    if r_min <= 0:
        raise ValueError("R coordinates must be strictly positive")
    dr = (r_max - r_min) / (nr - 1)
    dz = (z_max - z_min) / (nz - 1)
    r = radial_coords(nr, r_min, r_max)[1:-1][np.newaxis, :]
    a_w = 1.0 / dr**2 + 1.0 / (2.0 * r * dr)
    a_e = 1.0 / dr**2 - 1.0 / (2.0 * r * dr)
    a_ns = 1.0 / dz**2
    a_c = -2.0 * (1.0 / dr**2 + 1.0 / dz**2)
    cur = psi.data.astype(np.float64)
    for _ in range(picard_steps):
        interior = cur[1:-1, 1:-1]
        psi_axis = float(np.max(interior))
        if psi_axis <= 0.0:
            raise DegenerateFieldError(f"interior flux maximum {psi_axis} is not positive")
        psin = interior / psi_axis
        inside = (psin > 0.0) & (psin < 1.0)
        source = np.where(inside, r * p_axis * 4.0 * psin * (1.0 - psin), 0.0)
        lap = (
            a_w * cur[1:-1, :-2]
            + a_e * cur[1:-1, 2:]
            + a_ns * cur[:-2, 1:-1]
            + a_ns * cur[2:, 1:-1]
            + a_c * interior
        )
        nxt = cur.copy()
        nxt[1:-1, 1:-1] = interior + omega * (-mu0 * r * source - lap) / a_c
        cur = nxt.astype(np.float32).astype(np.float64)
    return make_buffer("f32", psi.extents, cur)

"""Reference stencil updates: 2D heat diffusion and 3D leapfrog wave propagation.

Both keep fp32 state but evaluate each update in fp64 before rounding back,
so an independent scalar implementation of the same expressions agrees to
well inside the verification tolerance.
"""

from __future__ import annotations

import numpy as np

from ..buffers import FieldBuffer, make_buffer


def reference_saxpy(a: float, x: FieldBuffer, y: FieldBuffer) -> FieldBuffer:
    """out[i] = a * x[i] + y[i], fp32."""
    if x.extents != y.extents:
        raise ValueError(f"saxpy length mismatch: {x.extents} vs {y.extents}")
    out = np.float32(a) * x.data + y.data
    return make_buffer("f32", x.extents, out)


def reference_heat2d(u: FieldBuffer, alpha: float, steps: int) -> FieldBuffer:
    """5-point heat stencil on the interior; the boundary ring is Dirichlet-fixed."""
    ny, nx = u.extents
    if ny < 3 or nx < 3:
        raise ValueError("heat2d grid must be at least 3x3")
    a = float(np.float32(alpha))
    cur = u.data.astype(np.float64)
    for _ in range(steps):
        nxt = cur.copy()
        c = cur[1:-1, 1:-1]
        neigh = cur[1:-1, :-2] + cur[1:-1, 2:] + cur[:-2, 1:-1] + cur[2:, 1:-1]
        nxt[1:-1, 1:-1] = c + a * (neigh - 4.0 * c)
        # round-trip through fp32 each step: candidates carry fp32 state
        cur = nxt.astype(np.float32).astype(np.float64)
    return make_buffer("f32", u.extents, cur)


def reference_wave3d(
    u_prev: FieldBuffer, u_curr: FieldBuffer, alpha: float, steps: int
) -> tuple[FieldBuffer, FieldBuffer]:
    """7-point leapfrog wave update; returns the last two time levels."""
    if u_prev.extents != u_curr.extents:
        raise ValueError(f"wave3d extent mismatch: {u_prev.extents} vs {u_curr.extents}")
    if any(e < 3 for e in u_curr.extents):
        raise ValueError("wave3d grid must be at least 3 cells per axis")
    a = float(np.float32(alpha))
    if a >= 1.0 / 3.0:
        raise ValueError(f"wave3d alpha={a} violates the CFL bound alpha < 1/3")
    prev = u_prev.data.astype(np.float64)
    cur = u_curr.data.astype(np.float64)
    for _ in range(steps):
        nxt = cur.copy()
        c = cur[1:-1, 1:-1, 1:-1]
        neigh = (
            cur[:-2, 1:-1, 1:-1]
            + cur[2:, 1:-1, 1:-1]
            + cur[1:-1, :-2, 1:-1]
            + cur[1:-1, 2:, 1:-1]
            + cur[1:-1, 1:-1, :-2]
            + cur[1:-1, 1:-1, 2:]
        )
        nxt[1:-1, 1:-1, 1:-1] = 2.0 * c - prev[1:-1, 1:-1, 1:-1] + a * (neigh - 6.0 * c)
        prev = cur
        cur = nxt.astype(np.float32).astype(np.float64)
    return (
        make_buffer("f32", u_curr.extents, prev),
        make_buffer("f32", u_curr.extents, cur),
    )

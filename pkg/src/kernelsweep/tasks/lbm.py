"""D2Q9 lattice Boltzmann: fused pull-stream + BGK collision, periodic, SoA."""

from __future__ import annotations

import numpy as np

from ..buffers import FieldBuffer, make_buffer

# Direction k: (cx, cy).  Rest, axis-aligned, then diagonals.
CX = (0, 1, 0, -1, 0, 1, -1, -1, 1)
CY = (0, 0, 1, 0, -1, 1, 1, -1, -1)
WEIGHTS = (4.0 / 9.0,) + (1.0 / 9.0,) * 4 + (1.0 / 36.0,) * 4


def reference_lbm(f: FieldBuffer, tau: float, steps: int) -> FieldBuffer:
    """Advance the nine distribution fields `steps` times; ping-pongs internally."""
    if tau <= 0.5:
        raise ValueError(f"lbm tau={tau} must exceed 0.5 for BGK stability")
    if f.extents[0] != 9:
        raise ValueError("lbm state carries 9 distribution fields")
    inv_tau = 1.0 / float(np.float32(tau))
    cur = f.data.astype(np.float64)
    for _ in range(steps):
        # pull-stream: the value landing at x comes from x - c_k
        fs = np.empty_like(cur)
        for k in range(9):
            fs[k] = np.roll(cur[k], shift=(CY[k], CX[k]), axis=(0, 1))
        rho = fs[0] + fs[1] + fs[2] + fs[3] + fs[4] + fs[5] + fs[6] + fs[7] + fs[8]
        ux = (fs[1] - fs[3] + fs[5] - fs[6] - fs[7] + fs[8]) / rho
        uy = (fs[2] - fs[4] + fs[5] + fs[6] - fs[7] - fs[8]) / rho
        usq = ux * ux + uy * uy
        out = np.empty_like(cur)
        for k in range(9):
            cu = CX[k] * ux + CY[k] * uy
            feq = WEIGHTS[k] * rho * (1.0 + 3.0 * cu + 4.5 * cu * cu - 1.5 * usq)
            out[k] = fs[k] - inv_tau * (fs[k] - feq)
        cur = out.astype(np.float32).astype(np.float64)
    return make_buffer("f32", f.extents, cur)


def total_mass(f: FieldBuffer) -> float:
    return float(np.sum(f.data.astype(np.float64)))

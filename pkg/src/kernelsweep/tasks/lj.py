"""Lennard-Jones molecular dynamics with a 27-neighbor cell list.

Reduced units, single species, cubic periodic box.  Forces are accumulated
per particle over cutoff-surviving neighbors in ascending particle order via
np.add.reduceat, which reduces serially, so an all-pairs evaluation over the
same pair set reproduces the fp64 forces bit-for-bit.
"""

from __future__ import annotations

import math

import numpy as np

from ..buffers import FieldBuffer, make_buffer


class CellOverflowError(RuntimeError):
    """A cell exceeded the fixed per-cell slot capacity."""


def lattice_geometry(n: int, density: float) -> tuple[int, float, float]:
    """(cells per edge, lattice constant, box edge) for an n-particle SC lattice."""
    m = int(math.ceil(round(n ** (1.0 / 3.0), 9)))
    while m * m * m < n:
        m += 1
    a = (1.0 / density) ** (1.0 / 3.0)
    return m, a, m * a


def cell_grid(box: float, r_cut: float) -> int:
    """Cells per edge; at least 3 so the 27-cell neighborhood is exact."""
    m = int(box / r_cut)
    if box < 3.0 * r_cut or m < 3:
        raise ValueError(f"box={box} must be at least 3 * r_cut={r_cut}")
    return m


def assign_cells(pos: np.ndarray, box: float, m: int) -> np.ndarray:
    """Linear cell id (cz * m + cy) * m + cx per particle."""
    c = np.floor(pos.astype(np.float64) * (m / box)).astype(np.int64)
    c = np.clip(c, 0, m - 1)
    return (c[:, 2] * m + c[:, 1]) * m + c[:, 0]


def build_cells(pos: np.ndarray, box: float, m: int, capacity: int):
    """Counting scatter: per-cell counts plus particle indices grouped by cell.

    Within a cell, particle indices appear in ascending order (stable sort),
    matching a sequential insertion scatter.
    """
    cell_id = assign_cells(pos, box, m)
    counts = np.bincount(cell_id, minlength=m * m * m)
    if int(counts.max(initial=0)) > capacity:
        raise CellOverflowError(
            f"cell occupancy {int(counts.max())} exceeds capacity {capacity}"
        )
    order = np.argsort(cell_id, kind="stable")
    starts = np.zeros(m * m * m + 1, dtype=np.int64)
    np.cumsum(counts, out=starts[1:])
    return counts, order, starts


def _pair_terms(pos64, box, r_cut, i_idx, j_idx):
    """Per-pair force contributions on i from j, cutoff-masked and compressed."""
    d = pos64[j_idx][np.newaxis, :, :] - pos64[i_idx][:, np.newaxis, :]
    d -= box * np.rint(d / box)
    r2 = d[:, :, 0] ** 2 + d[:, :, 1] ** 2 + d[:, :, 2] ** 2
    mask = (r2 < r_cut * r_cut) & (i_idx[:, np.newaxis] != j_idx[np.newaxis, :])
    inv2 = np.where(mask, 1.0 / np.where(mask, r2, 1.0), 0.0)
    inv6 = inv2 * inv2 * inv2
    coef = -24.0 * (2.0 * inv6 * inv6 - inv6) * inv2
    contrib = coef[:, :, np.newaxis] * d
    return mask, contrib


def cell_list_forces(pos: np.ndarray, box: float, r_cut: float, m: int, capacity: int) -> np.ndarray:
    """fp64 forces via the 27-neighbor cell walk with minimum-image wrap."""
    n = pos.shape[0]
    pos64 = pos.astype(np.float64)
    _, order, starts = build_cells(pos, box, m, capacity)
    forces = np.zeros((n, 3))
    offsets = [(dx, dy, dz) for dz in (-1, 0, 1) for dy in (-1, 0, 1) for dx in (-1, 0, 1)]
    for cz in range(m):
        for cy in range(m):
            for cx in range(m):
                cid = (cz * m + cy) * m + cx
                i_idx = order[starts[cid] : starts[cid + 1]]
                if i_idx.size == 0:
                    continue
                neigh = []
                for dx, dy, dz in offsets:
                    nid = (((cz + dz) % m) * m + ((cy + dy) % m)) * m + ((cx + dx) % m)
                    neigh.append(order[starts[nid] : starts[nid + 1]])
                j_idx = np.sort(np.concatenate(neigh))
                mask, contrib = _pair_terms(pos64, box, r_cut, np.sort(i_idx), j_idx)
                i_sorted = np.sort(i_idx)
                row_counts = mask.sum(axis=1)
                flat = contrib[mask]
                if flat.size == 0:
                    continue
                row_starts = np.zeros(i_sorted.size, dtype=np.int64)
                np.cumsum(row_counts[:-1], out=row_starts[1:])
                present = row_counts > 0
                for comp in range(3):
                    sums = np.add.reduceat(flat[:, comp], row_starts[present])
                    forces[i_sorted[present], comp] = sums
    return forces


def all_pairs_forces(pos: np.ndarray, box: float, r_cut: float) -> np.ndarray:
    """Brute-force O(N^2) forces, same cutoff and wrap; used as the test oracle."""
    n = pos.shape[0]
    pos64 = pos.astype(np.float64)
    i_idx = np.arange(n)
    mask, contrib = _pair_terms(pos64, box, r_cut, i_idx, i_idx)
    forces = np.zeros((n, 3))
    row_counts = mask.sum(axis=1)
    flat = contrib[mask]
    row_starts = np.zeros(n, dtype=np.int64)
    np.cumsum(row_counts[:-1], out=row_starts[1:])
    present = row_counts > 0
    for comp in range(3):
        forces[i_idx[present], comp] = np.add.reduceat(flat[:, comp], row_starts[present])
    return forces


def reference_lj(
    pos: FieldBuffer,
    vel: FieldBuffer,
    box: float,
    dt: float,
    r_cut: float,
    steps: int,
    capacity: int = 64,
) -> tuple[FieldBuffer, FieldBuffer]:
    """Kick-drift integration with cell-list forces; fp32 state, fp64 math."""
    m = cell_grid(box, r_cut)
    r = pos.data.astype(np.float64)
    v = vel.data.astype(np.float64)
    dt64 = float(np.float32(dt))
    for _ in range(steps):
        f = cell_list_forces(r.astype(np.float32), box, r_cut, m, capacity)
        v = v + f * dt64
        r = r + v * dt64
        r -= box * np.floor(r / box)
        r = r.astype(np.float32).astype(np.float64)
        v = v.astype(np.float32).astype(np.float64)
    return (
        make_buffer("f32", pos.extents, r),
        make_buffer("f32", vel.extents, v),
    )

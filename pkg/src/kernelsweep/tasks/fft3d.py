"""Unnormalized forward 3D complex FFT on a power-of-two cube.

Computed as three per-axis passes of length-N radix-2 transforms, ping-ponging
two arrays, in fp32 complex.  The direct O(N^2)-per-line DFT lives here too;
it is the independent oracle the tests compare against.
"""

from __future__ import annotations

import numpy as np

from ..buffers import FieldBuffer, make_buffer


def _bit_reverse_indices(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def fft_lines(x: np.ndarray) -> np.ndarray:
    """Radix-2 DIT FFT along the last axis of a (..., N) fp32 complex array."""
    n = x.shape[-1]
    if n & (n - 1) or n == 0:
        raise ValueError(f"line length {n} is not a power of two")
    y = x[..., _bit_reverse_indices(n)].copy()
    length = 2
    while length <= n:
        half = length // 2
        tw = np.exp(-2j * np.pi * np.arange(half) / length).astype(np.complex64)
        blocks = y.reshape(*y.shape[:-1], n // length, length)
        even = blocks[..., :half].copy()
        odd = blocks[..., half:] * tw
        blocks[..., :half] = even + odd
        blocks[..., half:] = even - odd
        length *= 2
    return y


def reference_fft3d(x: FieldBuffer) -> FieldBuffer:
    """Forward transform of an N^3 complex grid, axes x then y then z."""
    n = x.extents[0]
    if x.extents != (n, n, n) or n & (n - 1) or n == 0:
        raise ValueError(f"fft3d needs a power-of-two cube, got extents {x.extents}")
    cur = x.data.astype(np.complex64)
    for axis in (2, 1, 0):  # x fastest-varying first, then y, then z
        moved = np.moveaxis(cur, axis, -1)
        out = fft_lines(np.ascontiguousarray(moved))
        cur = np.ascontiguousarray(np.moveaxis(out, -1, axis))
    return make_buffer("c64_pair", x.extents, cur)


def direct_dft_lines(x: np.ndarray) -> np.ndarray:
    """O(N^2) DFT along the last axis, fp64, used as the oracle."""
    n = x.shape[-1]
    k = np.arange(n)
    w = np.exp(-2j * np.pi * np.outer(k, k) / n)
    return np.einsum("...n,kn->...k", x.astype(np.complex128), w)


def direct_dft3d(x: np.ndarray) -> np.ndarray:
    """Direct per-axis 3D DFT in fp64; independent of the radix-2 path."""
    cur = x.astype(np.complex128)
    for axis in (2, 1, 0):
        moved = np.moveaxis(cur, axis, -1)
        out = direct_dft_lines(moved)
        cur = np.moveaxis(out, -1, axis)
    return np.ascontiguousarray(cur)


def flops_per_transform(n: int) -> float:
    """Nominal arithmetic per 3D transform: 3 axes x N^2 lines x 5 N log2 N."""
    return 3.0 * n * n * (5.0 * n * float(np.log2(n)))

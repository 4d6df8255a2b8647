"""Counter-based pseudo-random streams.

Every random quantity in the benchmark is a pure function of (seed, stream,
index), so input generation and the Monte Carlo tasks are reproducible across
runs, thread counts and implementations.  The core primitive is the fmix32
avalanche (xor-shift-16, mul 0x85EBCA6B, xor-shift-13, mul 0xC2B2AE35,
xor-shift-16).
"""

from __future__ import annotations

import math

import numpy as np

MASK32 = 0xFFFFFFFF
GOLDEN32 = 0x9E3779B9
MIX_A = 0x85EBCA6B
MIX_B = 0xC2B2AE35

# Scale mapping a 32-bit hash h to the open interval (0, 1) via (h + 0.5) * INV32.
INV32 = 1.0 / 4294967296.0


def fmix32(h: int) -> int:
    """Scalar fmix32 avalanche over a 32-bit counter."""
    h &= MASK32
    h ^= h >> 16
    h = (h * MIX_A) & MASK32
    h ^= h >> 13
    h = (h * MIX_B) & MASK32
    h ^= h >> 16
    return h


def fmix32_array(h: np.ndarray) -> np.ndarray:
    """Vectorized fmix32; input is converted to uint32 (modular)."""
    h = h.astype(np.uint32, copy=True)
    h ^= h >> np.uint32(16)
    h *= np.uint32(MIX_A)
    h ^= h >> np.uint32(13)
    h *= np.uint32(MIX_B)
    h ^= h >> np.uint32(16)
    return h


def _counters(seed: int, stream: int, index: np.ndarray) -> np.ndarray:
    """Fold (seed, stream, index) into 32-bit counters; two fmix rounds."""
    lo = np.uint32(seed & MASK32)
    hi = np.uint32((seed >> 32) & MASK32)
    idx = index.astype(np.uint64)
    low = (idx & np.uint64(MASK32)).astype(np.uint32)
    high = (idx >> np.uint64(32)).astype(np.uint32)
    h = fmix32_array(low * np.uint32(GOLDEN32) ^ lo)
    h = fmix32_array(h ^ (np.uint32((stream * MIX_A) & MASK32)) ^ hi ^ high * np.uint32(MIX_B))
    return h


def uniform(seed: int, stream: int, count: int, offset: int = 0) -> np.ndarray:
    """`count` doubles in the open interval (0, 1)."""
    idx = np.arange(offset, offset + count, dtype=np.uint64)
    h = _counters(seed, stream, idx)
    return (h.astype(np.float64) + 0.5) * INV32


def normal(seed: int, stream: int, count: int, offset: int = 0) -> np.ndarray:
    """`count` standard-normal doubles via Box-Muller over the uniform stream.

    Element i consumes uniform indices (2i, 2i + 1), so disjoint offsets
    never overlap.
    """
    idx = np.arange(offset, offset + count, dtype=np.uint64)
    u1 = (_counters(seed, stream, 2 * idx).astype(np.float64) + 0.5) * INV32
    u2 = (_counters(seed, stream, 2 * idx + np.uint64(1)).astype(np.float64) + 0.5) * INV32
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * math.pi * u2)


# Stream ids, one per consumer, so buffers drawn from the same seed never alias.
STREAM_INPUT_PRIMARY = 1
STREAM_INPUT_SECONDARY = 2
STREAM_INPUT_TERTIARY = 3
STREAM_HMC_MOMENTUM = 16
STREAM_HMC_ACCEPT = 17

"""saxpy, heat2d and wave3d references against scalar-loop oracles."""

import numpy as np
import pytest

from kernelsweep.buffers import make_buffer
from kernelsweep.tasks.registry import CONSTANTS
from kernelsweep.tasks.stencils import reference_heat2d, reference_saxpy, reference_wave3d


def naive_heat2d(u, alpha, steps):
    """Independent double-loop oracle, fp64 state."""
    g = u.astype(np.float64).copy()
    ny, nx = g.shape
    for _ in range(steps):
        out = g.copy()
        for j in range(1, ny - 1):
            for i in range(1, nx - 1):
                out[j, i] = g[j, i] + alpha * (
                    g[j, i - 1] + g[j, i + 1] + g[j - 1, i] + g[j + 1, i] - 4.0 * g[j, i]
                )
        g = out
    return g


def naive_wave3d(prev, cur, alpha, steps):
    p = prev.astype(np.float64).copy()
    c = cur.astype(np.float64).copy()
    nz, ny, nx = c.shape
    for _ in range(steps):
        n = c.copy()
        for k in range(1, nz - 1):
            for j in range(1, ny - 1):
                for i in range(1, nx - 1):
                    lap = (
                        c[k - 1, j, i]
                        + c[k + 1, j, i]
                        + c[k, j - 1, i]
                        + c[k, j + 1, i]
                        + c[k, j, i - 1]
                        + c[k, j, i + 1]
                        - 6.0 * c[k, j, i]
                    )
                    n[k, j, i] = 2.0 * c[k, j, i] - p[k, j, i] + alpha * lap
        p, c = c, n
    return p, c


def test_saxpy_zero_scale_is_identity():
    rng = np.random.default_rng(0)
    x = make_buffer("f32", (64,), rng.standard_normal(64))
    y = make_buffer("f32", (64,), rng.standard_normal(64))
    out = reference_saxpy(0.0, x, y)
    assert np.array_equal(out.data, y.data)


def test_saxpy_unit_vectors():
    x = make_buffer("f32", (8,), np.ones(8))
    y = make_buffer("f32", (8,), np.ones(8))
    out = reference_saxpy(1.0, x, y)
    assert np.array_equal(out.data, np.full(8, 2.0, dtype=np.float32))


def test_saxpy_matches_scalar_loop():
    rng = np.random.default_rng(42)
    xv = rng.standard_normal(1024).astype(np.float32)
    yv = rng.standard_normal(1024).astype(np.float32)
    a = np.float32(1.5)
    expected = np.array([a * xv[i] + yv[i] for i in range(1024)], dtype=np.float32)
    out = reference_saxpy(1.5, make_buffer("f32", (1024,), xv), make_buffer("f32", (1024,), yv))
    assert np.array_equal(out.data, expected)


def test_saxpy_length_mismatch():
    x = make_buffer("f32", (8,), np.zeros(8))
    y = make_buffer("f32", (9,), np.zeros(9))
    with pytest.raises(ValueError):
        reference_saxpy(1.0, x, y)


def test_heat2d_uniform_field_is_fixed_point():
    u = make_buffer("f32", (12, 12), np.full((12, 12), 3.25))
    out = reference_heat2d(u, 0.25, 25)
    assert np.array_equal(out.data, u.data)


def test_heat2d_center_pulse_one_step():
    g = np.zeros((5, 5), dtype=np.float32)
    g[2, 2] = 1.0
    out = reference_heat2d(make_buffer("f32", (5, 5), g), 0.25, 1)
    assert out.data[2, 2] == 0.0
    for j, i in ((1, 2), (3, 2), (2, 1), (2, 3)):
        assert out.data[j, i] == np.float32(0.25)


def test_heat2d_matches_naive_oracle():
    rng = np.random.default_rng(7)
    g = rng.random((16, 16)).astype(np.float32)
    out = reference_heat2d(make_buffer("f32", (16, 16), g), 0.25, 10)
    expected = naive_heat2d(g, 0.25, 10)
    assert np.max(np.abs(out.data.astype(np.float64) - expected)) <= 1e-6


def test_heat2d_small_grid_rejected():
    with pytest.raises(ValueError):
        reference_heat2d(make_buffer("f32", (2, 4), np.zeros((2, 4))), 0.25, 1)


def test_wave3d_constant_field_is_fixed_point():
    c = np.full((8, 8, 8), 1.5, dtype=np.float32)
    prev, cur = reference_wave3d(
        make_buffer("f32", (8, 8, 8), c), make_buffer("f32", (8, 8, 8), c), 0.18, 7
    )
    assert np.array_equal(cur.data, c)
    assert np.array_equal(prev.data, c)


def test_wave3d_shipped_alpha():
    assert CONSTANTS["wave3d"]["alpha"] == 0.18


def test_wave3d_matches_naive_oracle():
    rng = np.random.default_rng(5)
    cur = (rng.random((12, 12, 12)) - 0.5).astype(np.float32)
    prev = cur.copy()
    got_prev, got_cur = reference_wave3d(
        make_buffer("f32", (12, 12, 12), prev), make_buffer("f32", (12, 12, 12), cur), 0.18, 5
    )
    exp_prev, exp_cur = naive_wave3d(prev, cur, 0.18, 5)
    assert np.max(np.abs(got_cur.data.astype(np.float64) - exp_cur)) <= 1e-6
    assert np.max(np.abs(got_prev.data.astype(np.float64) - exp_prev)) <= 1e-6


def test_wave3d_cfl_violation_rejected():
    c = np.zeros((4, 4, 4), dtype=np.float32)
    with pytest.raises(ValueError):
        reference_wave3d(make_buffer("f32", (4, 4, 4), c), make_buffer("f32", (4, 4, 4), c), 0.34, 1)


def test_wave3d_extent_mismatch_rejected():
    a = make_buffer("f32", (4, 4, 4), np.zeros((4, 4, 4)))
    b = make_buffer("f32", (4, 4, 5), np.zeros((4, 4, 5)))
    with pytest.raises(ValueError):
        reference_wave3d(a, b, 0.18, 1)

"""Ising checkerboard: accept-rule edge cases and the dual-implementation contract."""

import math

import numpy as np
import pytest

from kernelsweep import tasks
from kernelsweep.buffers import make_buffer
from kernelsweep.tasks.ising import accept_table, reference_ising


def scalar_twin(spins, beta, j, sweeps):
    """Independent scalar implementation of the bit-exactness contract.

    Pure-Python integers for the counter hash, the same frozen composition:
    counter = site ^ (sweep * 0x9E3779B9) ^ (color * 0x85EBCA6B), fmix32,
    u = (h + 0.5) / 2^32, flip iff u < min(1, exp(-2*beta*j*m)).
    """
    m32 = 0xFFFFFFFF
    beta = float(np.float32(beta))  # constants cross the ABI as fp32
    j = float(np.float32(j))

    def mix(h):
        h &= m32
        h ^= h >> 16
        h = (h * 0x85EBCA6B) & m32
        h ^= h >> 13
        h = (h * 0xC2B2AE35) & m32
        h ^= h >> 16
        return h

    table = {m: min(1.0, math.exp(-2.0 * beta * j * m)) for m in (-4, -2, 0, 2, 4)}
    ny, nx = spins.shape
    s = [[int(spins[y, x]) for x in range(nx)] for y in range(ny)]
    for sweep in range(sweeps):
        for color in (0, 1):
            flips = []
            for y in range(ny):
                for x in range(nx):
                    if (x + y) & 1 != color:
                        continue
                    h = (
                        s[y][(x - 1) % nx]
                        + s[y][(x + 1) % nx]
                        + s[(y - 1) % ny][x]
                        + s[(y + 1) % ny][x]
                    )
                    m = s[y][x] * h
                    counter = (y * nx + x) ^ ((sweep * 0x9E3779B9) & m32) ^ ((color * 0x85EBCA6B) & m32)
                    u = (mix(counter) + 0.5) / 4294967296.0
                    if u < table[m]:
                        flips.append((y, x))
            for y, x in flips:
                s[y][x] = -s[y][x]
    return np.array(s, dtype=np.int8)


def test_beta_zero_flips_every_site():
    task = tasks.build_task("ising")
    size = tasks.SizeConfig("ising", (("N", 8),), 20)
    spins = tasks.generate_input(task, size, 4)[0]
    out = reference_ising(spins, 0.0, 1.0, 1)
    # each color pass flips all of its sites; one sweep flips the whole lattice
    assert np.array_equal(out.data, -spins.data)


def test_large_beta_all_up_lattice_frozen():
    spins = make_buffer("i8", (8, 8), np.ones((8, 8), dtype=np.int8))
    out = reference_ising(spins, 1e3, 1.0, 5)
    assert np.array_equal(out.data, spins.data)
    table = accept_table(1e3, 1.0)
    assert table[4] == 0.0  # exp underflows for m = +4


@pytest.mark.parametrize("beta", [0.0, 0.4, 1.0])
def test_two_independent_implementations_byte_identical(beta):
    task = tasks.build_task("ising")
    size = tasks.SizeConfig("ising", (("N", 16),), 20)
    spins = tasks.generate_input(task, size, 1)[0]
    vectorized = reference_ising(spins, beta, 1.0, 10)
    scalar = scalar_twin(spins.data, beta, 1.0, 10)
    assert vectorized.data.tobytes() == scalar.tobytes()


def test_sweeps_deterministic_and_seedless():
    # the sweep generator is counter-based: same lattice -> same trajectory
    task = tasks.build_task("ising")
    size = tasks.SizeConfig("ising", (("N", 16),), 20)
    spins = tasks.generate_input(task, size, 2)[0]
    a = reference_ising(spins, 0.4, 1.0, 5)
    b = reference_ising(spins, 0.4, 1.0, 5)
    assert a.byte_equal(b)


def test_odd_extent_rejected():
    spins = make_buffer("i8", (7, 8), np.ones((7, 8), dtype=np.int8))
    with pytest.raises(ValueError):
        reference_ising(spins, 0.4, 1.0, 1)

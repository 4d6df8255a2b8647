"""Hamiltonian Monte Carlo on an anisotropic Gaussian target.

One logical chain per index, K chains advanced in lockstep.  Momentum draws
and accept draws come from the counter-based generator, so a run is fully
determined by (target, q0, eps, L, seed).  Correctness of candidates is
statistical: sample mean and Frobenius covariance error against the known
target moments.
"""

from __future__ import annotations

import numpy as np

from .. import prng
from ..buffers import FieldBuffer, make_buffer

# The target precision matrix depends only on the dimension, never on the run
# seed, so the moment check always refers to the same distribution.
TARGET_ROTATION_SEED = 0x5EEDFACE


def target_matrix(d: int, eig_min: float = 1.0, eig_max: float = 100.0) -> np.ndarray:
    """SPD precision matrix: log-spaced eigenvalues rotated by a seeded orthogonal Q."""
    eigs = np.logspace(np.log10(eig_min), np.log10(eig_max), d)
    raw = prng.normal(TARGET_ROTATION_SEED, 7, d * d).reshape(d, d)
    q, r = np.linalg.qr(raw)
    q = q * np.sign(np.diag(r))[np.newaxis, :]
    a = np.einsum("ij,j,kj->ik", q, eigs, q)
    a = 0.5 * (a + a.T)
    np.linalg.cholesky(a)  # raises LinAlgError if not SPD
    return a


def target_covariance(d: int, eig_min: float = 1.0, eig_max: float = 100.0) -> np.ndarray:
    """Closed-form inverse of the target precision matrix."""
    eigs = np.logspace(np.log10(eig_min), np.log10(eig_max), d)
    raw = prng.normal(TARGET_ROTATION_SEED, 7, d * d).reshape(d, d)
    q, r = np.linalg.qr(raw)
    q = q * np.sign(np.diag(r))[np.newaxis, :]
    return np.einsum("ij,j,kj->ik", q, 1.0 / eigs, q)


def leapfrog(a: np.ndarray, q: np.ndarray, p: np.ndarray, eps: float, l_steps: int):
    """L-substep leapfrog: half kick, L-1 full drift/kick alternations, half kick."""
    grad = np.einsum("kd,de->ke", q, a)
    p = p - 0.5 * eps * grad
    for i in range(l_steps):
        q = q + eps * p
        grad = np.einsum("kd,de->ke", q, a)
        if i < l_steps - 1:
            p = p - eps * grad
    p = p - 0.5 * eps * grad
    return q, p


def hamiltonian(a: np.ndarray, q: np.ndarray, p: np.ndarray) -> np.ndarray:
    u = 0.5 * np.einsum("kd,de,ke->k", q, a, q)
    k = 0.5 * np.einsum("kd,kd->k", p, p)
    return u + k


def reference_hmc(
    a_buf: FieldBuffer,
    q0: FieldBuffer,
    eps: float,
    l_steps: int,
    n_chains: int,
    n_steps: int,
    seed: int,
    return_trajectory: bool = False,
):
    """Run K chains for n_steps Metropolis-adjusted leapfrog iterations.

    Returns the final per-chain states as an fp32 buffer; with
    return_trajectory=True additionally returns the (n_steps, K, d) fp64
    state history for statistical tests.
    """
    if l_steps < 1:
        raise ValueError("hmc needs at least one leapfrog substep")
    d = a_buf.extents[0]
    a = a_buf.data.astype(np.float64)
    np.linalg.cholesky(a)  # not SPD -> LinAlgError at construction time
    q = q0.data.astype(np.float64).reshape(n_chains, d)
    trajectory = np.empty((n_steps, n_chains, d)) if return_trajectory else None
    for step in range(n_steps):
        p = prng.normal(seed, prng.STREAM_HMC_MOMENTUM, n_chains * d, offset=step * n_chains * d)
        p = p.reshape(n_chains, d)
        h0 = hamiltonian(a, q, p)
        q_new, p_new = leapfrog(a, q, p, eps, l_steps)
        h1 = hamiltonian(a, q_new, p_new)
        u = prng.uniform(seed, prng.STREAM_HMC_ACCEPT, n_chains, offset=step * n_chains)
        accept = np.log(u) < -(h1 - h0)
        q = np.where(accept[:, np.newaxis], q_new, q)
        if trajectory is not None:
            trajectory[step] = q
    samples = make_buffer("f32", (n_chains, d), q)
    if return_trajectory:
        return samples, trajectory
    return samples


def sample_moment_errors(samples: np.ndarray, d: int, eig_min: float = 1.0, eig_max: float = 100.0):
    """(max-abs mean error, Frobenius-relative covariance error) vs the target."""
    x = samples.reshape(-1, d).astype(np.float64)
    mean = x.mean(axis=0)
    centered = x - mean[np.newaxis, :]
    cov = np.einsum("ki,kj->ij", centered, centered) / (x.shape[0] - 1)
    target = target_covariance(d, eig_min, eig_max)
    mean_err = float(np.max(np.abs(mean)))
    cov_err = float(np.linalg.norm(cov - target) / np.linalg.norm(target))
    return mean_err, cov_err

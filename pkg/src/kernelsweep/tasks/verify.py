"""Verification: apply a task's rule to candidate output against the reference.

Every failure mode, including shape mismatches and non-finite values, comes
back as a (passed=0, metric, detail) triple; nothing here raises on bad
candidate output.  The detail string names the violating size and metric and
is what ends up in feedback packets.
"""

from __future__ import annotations

import numpy as np

from ..buffers import FieldBuffer
from .hmc import sample_moment_errors
from .types import SizeConfig, TaskSpec


def verify(
    task: TaskSpec,
    size: SizeConfig,
    candidate_output: list[FieldBuffer],
    reference_output: list[FieldBuffer],
) -> tuple[int, float, str]:
    rule = task.verification
    label = size.label
    if len(candidate_output) != len(reference_output):
        return 0, float("inf"), f"{label}: shape mismatch (buffer count)"
    for c, r in zip(candidate_output, reference_output):
        if c.extents != r.extents or c.element_kind != r.element_kind:
            return 0, float("inf"), f"{label}: shape mismatch ({c.extents} vs {r.extents})"

    if rule.kind == "byte_equality":
        differing = 0
        for c, r in zip(candidate_output, reference_output):
            a = c.data.tobytes()
            b = r.data.tobytes()
            if a != b:
                differing += sum(x != y for x, y in zip(a, b))
        if differing == 0:
            return 1, 0.0, f"{label}: exact"
        return 0, float(differing), f"{label}: byte equality failed, {differing} bytes differ"

    if rule.kind == "statistical_moments":
        samples = candidate_output[0].data
        if not np.all(np.isfinite(samples)):
            return 0, float("inf"), f"{label}: non-finite values in samples"
        d = size.param("d")
        mean_err, cov_err = sample_moment_errors(
            samples, d, task.constants.get("eig_min", 1.0), task.constants.get("eig_max", 100.0)
        )
        ok = mean_err <= rule.stat_mean_tol and cov_err <= rule.stat_cov_tol
        detail = (
            f"{label}: sample mean error {mean_err:.4f} (tol {rule.stat_mean_tol}), "
            f"covariance Frobenius error {cov_err:.4f} (tol {rule.stat_cov_tol})"
        )
        return (1 if ok else 0), cov_err, detail

    if rule.kind == "relative_max_norm":
        worst = 0.0
        bound = 0.0
        for c, r in zip(candidate_output, reference_output):
            diff = np.abs(c.data.astype(np.complex128) - r.data.astype(np.complex128))
            ref_inf = float(np.max(np.abs(r.data.astype(np.complex128))))
            err = float(np.max(diff)) if diff.size else 0.0
            if not np.isfinite(err):
                return 0, float("inf"), f"{label}: non-finite values in output"
            b = rule.abs_tol + rule.rel_tol * ref_inf
            if err - b > worst - bound:
                worst, bound = err, b
        ok = worst <= bound
        detail = f"{label}: max-norm error {worst:.3e} (bound {bound:.3e})"
        return (1 if ok else 0), worst, detail

    # max_abs_tolerance: scaled by the reference magnitude
    worst = 0.0
    bound = 0.0
    for c, r in zip(candidate_output, reference_output):
        cd = c.data.astype(np.float64)
        rd = r.data.astype(np.float64)
        if not np.all(np.isfinite(cd)):
            return 0, float("inf"), f"{label}: non-finite values in output"
        err = float(np.max(np.abs(cd - rd))) if cd.size else 0.0
        scale = float(np.max(np.abs(rd))) if rd.size else 0.0
        b = rule.abs_tol * (1.0 + scale)
        if err - b > worst - bound:
            worst, bound = err, b
    ok = worst <= bound
    detail = f"{label}: max-abs error {worst:.3e} (tol {bound:.3e})"
    return (1 if ok else 0), worst, detail

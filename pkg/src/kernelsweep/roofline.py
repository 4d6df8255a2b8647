"""Roofline scoring: chip peaks, per-task work models, fractions of ceiling.

Throughput is carried internally in SI units (bytes/s, FLOP/s); GB/s and
GFLOPS only appear at the reporting edge.  The in-distribution score is the
geometric mean of the per-size fractions, hard-gated to zero when any size
fails verification; the held-out gate is the single-size product f * chi.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .tasks.types import SizeConfig, TaskSpec


@dataclass(frozen=True)
class ChipPeaks:
    name: str
    peak_fp32_gflops: float
    peak_dram_gbs: float

    def __post_init__(self):
        if self.peak_fp32_gflops <= 0 or self.peak_dram_gbs <= 0:
            raise ValueError("chip peaks must be strictly positive")

    @property
    def peak_flops(self) -> float:
        return self.peak_fp32_gflops * 1e9

    @property
    def peak_bytes_per_s(self) -> float:
        return self.peak_dram_gbs * 1e9


def load_chip_registry(path=None) -> dict:
    """name -> ChipPeaks from the packaged registry or an override file."""
    if path is not None:
        raw = json.loads(open(path).read())
    else:
        raw = json.loads(resources.files("kernelsweep.data").joinpath("chips.json").read_text())
    return {
        key: ChipPeaks(val["name"], float(val["peak_fp32_gflops"]), float(val["peak_dram_gbs"]))
        for key, val in raw.items()
    }


@dataclass(frozen=True)
class WorkModel:
    task_id: str
    kind: str  # bytes_per_unit | flops_per_unit
    coefficient: float  # bytes or FLOPs per unit per step

    def unit_count(self, size: SizeConfig) -> float:
        return _UNIT_COUNTS[self.task_id](size)

    def work_per_evaluation(self, size: SizeConfig) -> float:
        """Total bytes or FLOPs for one timed repetition (all steps)."""
        return self.coefficient * self.unit_count(size) * size.steps


def _hmc_units(size: SizeConfig) -> float:
    from .tasks.registry import CONSTANTS

    d = size.param("d")
    k = size.param("K")
    l_steps = int(CONSTANTS["hmc"]["L"])  # one matvec per kick, L+1 kicks per step
    return float(k * (l_steps + 1) * d * d)


_UNIT_COUNTS = {
    "saxpy": lambda s: float(s.param("n")),
    "heat2d": lambda s: float(s.param("N")) ** 2,
    "wave3d": lambda s: float(s.param("N")) ** 3,
    "nbody": lambda s: float(s.param("N")) ** 2,
    "hmc": _hmc_units,
    "lbm": lambda s: float(s.param("N")) ** 2,
    "ising": lambda s: float(s.param("N")) ** 2,
    "lj": lambda s: float(s.param("N")) * 27.0 * 16.0,
    "gradshaf": lambda s: float(s.param("N")) ** 2,
    "fft3d": lambda s: float(s.param("N")) ** 3,
}

# Bytes-per-unit tasks carry DRAM traffic coefficients; FLOPs-per-unit tasks
# carry arithmetic coefficients.  lj's 30 FLOPs over a nominal 16-deep cell
# walk is a normalization constant: only ratios across candidates matter.
WORK_MODELS = {
    "saxpy": WorkModel("saxpy", "bytes_per_unit", 12.0),
    "heat2d": WorkModel("heat2d", "bytes_per_unit", 8.0),
    "wave3d": WorkModel("wave3d", "bytes_per_unit", 12.0),
    "nbody": WorkModel("nbody", "flops_per_unit", 20.0),
    "hmc": WorkModel("hmc", "flops_per_unit", 2.0),
    "lbm": WorkModel("lbm", "bytes_per_unit", 72.0),
    "ising": WorkModel("ising", "bytes_per_unit", 2.0),
    "lj": WorkModel("lj", "flops_per_unit", 30.0),
    "gradshaf": WorkModel("gradshaf", "bytes_per_unit", 12.0),
    "fft3d": WorkModel("fft3d", "bytes_per_unit", 96.0),
}


def work_model(task_id: str) -> WorkModel:
    try:
        return WORK_MODELS[task_id]
    except KeyError:
        raise KeyError(f"no work model registered for task {task_id!r}") from None


def ceiling(task: TaskSpec, size: SizeConfig, chip: ChipPeaks) -> float:
    """Per-size roofline ceiling in SI units (static per chip and bound kind)."""
    model = work_model(task.id)
    if model.kind == "bytes_per_unit":
        return chip.peak_bytes_per_s
    return chip.peak_flops


def achieved(task: TaskSpec, size: SizeConfig, elapsed_seconds: float) -> float:
    """Throughput in SI units for one evaluation that took elapsed_seconds."""
    if elapsed_seconds <= 0:
        raise ValueError(f"elapsed time must be positive, got {elapsed_seconds}")
    return work_model(task.id).work_per_evaluation(size) / elapsed_seconds


def fraction_of_ceiling(task: TaskSpec, size: SizeConfig, elapsed_seconds: float, chip: ChipPeaks) -> float:
    return achieved(task, size, elapsed_seconds) / ceiling(task, size, chip)


def in_dist_score(per_size: list) -> float:
    """Gated geometric mean over exactly three (passed, fraction) entries."""
    if len(per_size) != 3:
        raise ValueError(f"in-distribution score takes exactly 3 sizes, got {len(per_size)}")
    fracs = []
    for passed, fraction in per_size:
        if fraction < 0:
            raise ValueError(f"fraction {fraction} must be nonnegative")
        if not passed:
            return 0.0
        fracs.append(fraction)
    return float(np.cbrt(fracs[0] * fracs[1] * fracs[2]))


def held_out_score(passed: int, fraction: float) -> float:
    """f * chi at the held-out size; never enters any feedback packet."""
    if fraction < 0:
        raise ValueError(f"fraction {fraction} must be nonnegative")
    return fraction * (1.0 if passed else 0.0)

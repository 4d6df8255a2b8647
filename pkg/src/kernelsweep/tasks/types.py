"""Task, size and verification-rule types for the benchmark suite."""

from __future__ import annotations

from dataclasses import dataclass, field

TASK_IDS = (
    "saxpy",
    "heat2d",
    "wave3d",
    "nbody",
    "hmc",
    "lbm",
    "ising",
    "lj",
    "gradshaf",
    "fft3d",
)

REGIMES = {
    "saxpy": "smoke",
    "heat2d": "R1",
    "wave3d": "R1",
    "nbody": "R2",
    "hmc": "R2",
    "lbm": "R3",
    "ising": "R3",
    "lj": "R4",
    "gradshaf": "R5",
    "fft3d": "R6",
}

# bandwidth-bound tasks cap at peak DRAM GB/s, compute-bound at peak FP32 GFLOPS
BOUND_KIND = {
    "saxpy": "bandwidth",
    "heat2d": "bandwidth",
    "wave3d": "bandwidth",
    "nbody": "compute",
    "hmc": "compute",
    "lbm": "bandwidth",
    "ising": "bandwidth",
    "lj": "compute",
    "gradshaf": "bandwidth",
    "fft3d": "bandwidth",
}


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class SizeConfig:
    """One problem-size configuration: named positive integers plus a step count."""

    task_id: str
    params: tuple  # ordered ((name, value), ...)
    steps: int

    def __post_init__(self):
        object.__setattr__(self, "params", tuple((str(k), int(v)) for k, v in self.params))
        for name, value in self.params:
            if value <= 0:
                raise ValueError(f"size param {name}={value} must be positive")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.task_id == "fft3d":
            n = dict(self.params)["N"]
            if not _is_pow2(n):
                raise ValueError(f"fft3d edge N={n} must be a power of two")
        if self.task_id == "ising":
            for name, value in self.params:
                if value % 2 != 0:
                    raise ValueError("ising lattice extents must be even (checkerboard parity)")

    @property
    def label(self) -> str:
        return ",".join(f"{k}={v}" for k, v in self.params)

    def param(self, name: str) -> int:
        return dict(self.params)[name]


@dataclass(frozen=True)
class VerificationRule:
    kind: str  # max_abs_tolerance | relative_max_norm | byte_equality | statistical_moments
    abs_tol: float = 0.0
    rel_tol: float = 0.0
    stat_mean_tol: float = 0.0
    stat_cov_tol: float = 0.0

    def __post_init__(self):
        kinds = ("max_abs_tolerance", "relative_max_norm", "byte_equality", "statistical_moments")
        if self.kind not in kinds:
            raise ValueError(f"unknown verification kind {self.kind!r}")


@dataclass
class TaskSpec:
    """A benchmark task: sizes, constants, verification rule and seed kernel."""

    id: str
    regime: str
    in_dist: tuple  # exactly 3 SizeConfig
    held_out: SizeConfig
    bound_kind: str
    constants: dict
    verification: VerificationRule
    seed_source: str | None = None
    profile: str = "desk"
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.id not in TASK_IDS:
            raise ValueError(f"unknown task id {self.id!r}")
        if len(self.in_dist) != 3:
            raise ValueError("a task carries exactly 3 in-distribution size configurations")
        labels = {s.label for s in self.in_dist}
        if self.held_out.label in labels:
            raise ValueError("held-out size must not appear among the in-distribution sizes")
        if self.regime != REGIMES[self.id]:
            raise ValueError(f"task {self.id} belongs to regime {REGIMES[self.id]}")
        if self.bound_kind != BOUND_KIND[self.id]:
            raise ValueError(f"task {self.id} is {BOUND_KIND[self.id]}-bound")

    @property
    def sizes(self) -> tuple:
        return tuple(self.in_dist) + (self.held_out,)

    def size_by_label(self, label: str) -> SizeConfig:
        for s in self.sizes:
            if s.label == label:
                return s
        raise KeyError(label)

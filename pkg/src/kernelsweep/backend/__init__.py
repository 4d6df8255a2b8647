"""Candidate execution backends and the shared candidate/compile/run types."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from ..buffers import FieldBuffer
from .timing import TIMED_COUNT, WARMUP_COUNT, TimingSample, run_protocol


def source_hash(source: str) -> str:
    return hashlib.sha256(source.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Candidate:
    """One kernel source artifact plus its provenance."""

    source: str
    dialect: str = "native_plugin"
    parent_hash: str | None = None
    iteration: int = 0
    origin: str = "seed"  # seed | mutator

    @property
    def hash(self) -> str:
        return source_hash(self.source)


@dataclass
class CompileOutcome:
    ok: bool
    diagnostics: str = ""
    artifact_path: str | None = None
    handle: object = None  # backend-private compiled representation

    def __post_init__(self):
        if not self.ok and not self.diagnostics:
            raise ValueError("failed compiles must carry diagnostics")


@dataclass
class RunOutcome:
    outputs: list  # FieldBuffer, one per task output slot
    timing: TimingSample


class BackendRunError(RuntimeError):
    """Load failure, missing entry symbol, watchdog timeout or candidate crash."""


@dataclass
class RunRecord:
    """Instrumentation row: one candidate execution at one size."""

    task_id: str
    size_label: str
    purpose: str  # search | held_out_eval | held_out_anchor | validate
    warmup: int = WARMUP_COUNT
    timed: int = TIMED_COUNT


__all__ = [
    "BackendRunError",
    "Candidate",
    "CompileOutcome",
    "RunOutcome",
    "RunRecord",
    "TimingSample",
    "TIMED_COUNT",
    "WARMUP_COUNT",
    "run_protocol",
    "source_hash",
]

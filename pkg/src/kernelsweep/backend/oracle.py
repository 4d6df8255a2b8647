"""Deterministic oracle backend: a stand-in candidate executor for tests.

Candidates in the oracle dialect are small JSON directive documents instead
of native sources.  Outputs equal the task reference (optionally corrupted at
selected sizes) and timings follow a synthetic model, so full evolution-loop
runs are exactly reproducible without a compiler.

Directive schema:

    {
      "slowdown": {"default": 2.0, "in_dist": 1.0, "0": 1.5, "other": 13.0},
      "corrupt":  ["other"],
      "fail":     "run"
    }

Size selectors: "0"/"1"/"2" pick one in-distribution size, "in_dist" all
three, "other" any size outside the in-distribution set (the held-out size,
without naming it), "default" everything else.  Slowdown s yields a synthetic
fraction-of-ceiling nominal_fraction / s at that size.
"""

from __future__ import annotations

import json

import numpy as np

from ..buffers import FieldBuffer
from ..roofline import ChipPeaks, ceiling, work_model
from ..tasks import reference_outputs
from ..tasks.types import SizeConfig, TaskSpec
from . import BackendRunError, Candidate, CompileOutcome, RunOutcome, RunRecord, run_protocol

_ALLOWED_KEYS = {"slowdown", "corrupt", "fail"}
_ALLOWED_SELECTORS = {"default", "in_dist", "other", "0", "1", "2"}


def oracle_source(slowdown=None, corrupt=None, fail=None) -> str:
    """Convenience constructor for directive documents."""
    doc: dict = {}
    if slowdown is not None:
        doc["slowdown"] = (
            {"default": float(slowdown)} if isinstance(slowdown, (int, float)) else slowdown
        )
    if corrupt:
        doc["corrupt"] = list(corrupt)
    if fail:
        doc["fail"] = fail
    return json.dumps(doc)


ORACLE_SEED_SOURCE = oracle_source(slowdown=2.0)


class _Behavior:
    def __init__(self, doc: dict):
        self.slowdown = {str(k): float(v) for k, v in doc.get("slowdown", {}).items()}
        self.corrupt = [str(s) for s in doc.get("corrupt", [])]
        self.fail = doc.get("fail")

    def _selectors_for(self, task: TaskSpec, size: SizeConfig):
        labels = [s.label for s in task.in_dist]
        if size.label in labels:
            return (str(labels.index(size.label)), "in_dist", "default")
        return ("other", "default")

    def slowdown_at(self, task: TaskSpec, size: SizeConfig) -> float:
        for sel in self._selectors_for(task, size):
            if sel in self.slowdown:
                return self.slowdown[sel]
        return 1.0

    def corrupt_at(self, task: TaskSpec, size: SizeConfig) -> bool:
        return any(sel in self.corrupt for sel in self._selectors_for(task, size))


def parse_directives(source: str) -> _Behavior:
    doc = json.loads(source)
    if not isinstance(doc, dict):
        raise ValueError("directive document must be a JSON object")
    unknown = set(doc) - _ALLOWED_KEYS
    if unknown:
        raise ValueError(f"unknown directive keys: {sorted(unknown)}")
    for sel in doc.get("slowdown", {}):
        if str(sel) not in _ALLOWED_SELECTORS:
            raise ValueError(f"unknown slowdown selector {sel!r}")
        if float(doc["slowdown"][sel]) < 1.0:
            raise ValueError("slowdown factors must be >= 1 (1.0 is the model optimum)")
    for sel in doc.get("corrupt", []):
        if str(sel) not in _ALLOWED_SELECTORS:
            raise ValueError(f"unknown corrupt selector {sel!r}")
    if doc.get("fail") not in (None, "run"):
        raise ValueError(f"unknown fail mode {doc.get('fail')!r}")
    return _Behavior(doc)


def _corrupted(buf: FieldBuffer) -> FieldBuffer:
    out = buf.copy()
    if out.element_kind == "i8":
        np.negative(out.data, out=out.data)
    elif out.element_kind == "u32":
        out.data += np.uint32(1)
    else:
        out.data *= out.data.dtype.type(3.0)
    return out


class OracleBackend:
    """Reference-backed pseudo-candidate executor with synthetic timing."""

    dialect = "oracle"

    def __init__(self, chip: ChipPeaks, nominal_fraction: float = 0.5):
        if nominal_fraction <= 0:
            raise ValueError("nominal fraction must be positive")
        self.chip = chip
        self.nominal_fraction = nominal_fraction
        self.runs: list[RunRecord] = []

    def compile(self, candidate: Candidate, workdir=None) -> CompileOutcome:
        try:
            behavior = parse_directives(candidate.source)
        except (ValueError, json.JSONDecodeError) as exc:
            return CompileOutcome(False, f"oracle dialect error: {exc}")
        return CompileOutcome(True, "", None, behavior)

    def model_elapsed(self, task: TaskSpec, size: SizeConfig, slowdown: float) -> float:
        work = work_model(task.id).work_per_evaluation(size)
        return work / (self.nominal_fraction * ceiling(task, size, self.chip)) * slowdown

    def run(
        self,
        outcome: CompileOutcome,
        task: TaskSpec,
        size: SizeConfig,
        seed: int,
        inputs=None,
        purpose: str = "search",
    ) -> RunOutcome:
        behavior: _Behavior = outcome.handle
        if behavior is None:
            raise BackendRunError("cannot run a failed compile")
        self.runs.append(RunRecord(task.id, size.label, purpose))
        if behavior.fail == "run":
            raise BackendRunError("planted run failure")
        elapsed = self.model_elapsed(task, size, behavior.slowdown_at(task, size))

        clock_state = {"t": 0.0}

        def run_once():
            clock_state["t"] += elapsed

        timing = run_protocol(run_once, clock=lambda: clock_state["t"])
        outputs = reference_outputs(task, size, seed)
        if behavior.corrupt_at(task, size):
            outputs = [_corrupted(b) for b in outputs]
        return RunOutcome(outputs, timing)

    def held_out_runs(self, task: TaskSpec) -> list[RunRecord]:
        label = task.held_out.label
        return [r for r in self.runs if r.size_label == label and r.task_id == task.id]

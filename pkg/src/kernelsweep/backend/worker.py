"""Subprocess worker: run one compiled candidate at one size and dump results.

Invoked as
    python -m kernelsweep.backend.worker ARTIFACT TASK PROFILE SIZE_LABEL SEED OUT.npz

Inputs are regenerated deterministically from (task, profile, size, seed), so
only small scalars cross the process boundary; outputs and per-repetition
timings come back in a single .npz file.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from ..buffers import FieldBuffer
from ..tasks import build_task, generate_input
from ..tasks.inputs import OUTPUT_BUFFERS
from . import RunOutcome
from .timing import TimingSample


def encode_result(out_path, outputs, timing: TimingSample):
    payload = {"per_rep_seconds": np.asarray(timing.per_rep_seconds)}
    for i, buf in enumerate(outputs):
        payload[f"out{i}"] = buf.data
    np.savez(out_path, **payload)


def decode_result(out_path, task) -> RunOutcome:
    with np.load(out_path) as data:
        per_rep = [float(x) for x in data["per_rep_seconds"]]
        outputs = []
        for i in range(len(OUTPUT_BUFFERS[task.id])):
            arr = data[f"out{i}"]
            kind = _kind_for(arr.dtype)
            outputs.append(FieldBuffer(kind, tuple(arr.shape), np.ascontiguousarray(arr)))
    return RunOutcome(outputs, TimingSample(per_rep))


def _kind_for(dtype) -> str:
    return {
        np.dtype(np.float32): "f32",
        np.dtype(np.complex64): "c64_pair",
        np.dtype(np.int8): "i8",
        np.dtype(np.uint32): "u32",
    }[np.dtype(dtype)]


def main(argv) -> int:
    artifact, task_id, profile, size_label, seed_s, out_path = argv
    task = build_task(task_id, profile)
    size = task.size_by_label(size_label)
    seed = int(seed_s)
    inputs = generate_input(task, size, seed)
    from .native import run_artifact_in_process

    result = run_artifact_in_process(artifact, task, size, seed, inputs, watchdog_seconds=None)
    encode_result(Path(out_path), result.outputs, result.timing)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))

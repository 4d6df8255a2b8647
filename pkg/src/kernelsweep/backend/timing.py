"""The fixed timing protocol: 3 untimed warmups, 10 timed repetitions, median.

Every backend and every size goes through run_protocol, so the protocol
cannot drift between the native and the oracle paths.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field

WARMUP_COUNT = 3
TIMED_COUNT = 10


@dataclass
class TimingSample:
    per_rep_seconds: list
    warmup_count: int = WARMUP_COUNT
    timed_count: int = TIMED_COUNT
    median_seconds: float = field(init=False)

    def __post_init__(self):
        if len(self.per_rep_seconds) != self.timed_count:
            raise ValueError(
                f"expected {self.timed_count} timed repetitions, got {len(self.per_rep_seconds)}"
            )
        self.median_seconds = float(statistics.median(self.per_rep_seconds))


def run_protocol(run_once, reset=None, clock=time.perf_counter) -> TimingSample:
    """Execute warmups then timed repetitions; returns the median-bearing sample.

    reset restores pristine input state before every repetition and stays
    outside the timed window; the clock is injectable for deterministic
    backends.
    """
    for _ in range(WARMUP_COUNT):
        if reset is not None:
            reset()
        run_once()
    per_rep = []
    for _ in range(TIMED_COUNT):
        if reset is not None:
            reset()
        t0 = clock()
        run_once()
        t1 = clock()
        per_rep.append(t1 - t0)
    return TimingSample(per_rep)

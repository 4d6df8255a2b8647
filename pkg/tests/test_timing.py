"""The fixed 3-warmup / 10-timed / median protocol."""

import pytest

from kernelsweep.backend.timing import TIMED_COUNT, WARMUP_COUNT, TimingSample, run_protocol


def test_protocol_counts_are_fixed():
    assert WARMUP_COUNT == 3
    assert TIMED_COUNT == 10


def test_run_protocol_executes_13_reps_and_times_10():
    calls = {"n": 0, "resets": 0}
    t = {"now": 0.0}

    def run_once():
        calls["n"] += 1
        t["now"] += 0.001 * calls["n"]  # rep k costs k ms

    def reset():
        calls["resets"] += 1

    sample = run_protocol(run_once, reset=reset, clock=lambda: t["now"])
    assert calls["n"] == 13
    assert calls["resets"] == 13
    assert len(sample.per_rep_seconds) == 10


def test_median_of_one_through_ten_milliseconds():
    # timed reps of 1..10 ms -> median 5.5 ms
    sample = TimingSample([0.001 * k for k in range(1, 11)])
    assert sample.median_seconds == pytest.approx(0.0055)


def test_sample_rejects_wrong_count():
    with pytest.raises(ValueError):
        TimingSample([0.001] * 9)

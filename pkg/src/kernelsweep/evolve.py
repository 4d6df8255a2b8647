"""The (1+1) evolution loop: evaluate, promote on strict improvement, feed back.

The held-out size is evaluated exactly once, after the final iteration, and
its verdict lives in a type (HeldOutVerdict) that never enters a
FeedbackPacket, so the mutator cannot see it even by accident.
"""

from __future__ import annotations

import json
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from . import roofline
from .backend import BackendRunError, Candidate, CompileOutcome
from .mutators import MutatorFailure
from .roofline import ChipPeaks, held_out_score, in_dist_score
from .tasks import generate_input, reference_outputs, verify
from .tasks.types import SizeConfig, TaskSpec

HISTORY_DEPTH = 5


class ConfigurationError(RuntimeError):
    """Broken benchmark or run configuration (e.g. the seed kernel fails)."""


@dataclass
class SizeScore:
    size_label: str
    passed: int
    achieved: float  # SI units (bytes/s or FLOP/s)
    fraction: float
    elapsed_seconds: float


@dataclass
class EvalResult:
    """Outcome of the compile-run-verify pipeline for one candidate."""

    kind: str  # compile_fail | run_fail | correct_fail | scored
    diagnostics: str = ""
    violating_size: str = ""
    error_metric: float = 0.0
    detail: str = ""
    score: float = 0.0
    per_size: list = field(default_factory=list)

    def __post_init__(self):
        kinds = ("compile_fail", "run_fail", "correct_fail", "scored")
        if self.kind not in kinds:
            raise ValueError(f"unknown result kind {self.kind!r}")
        if self.kind in ("compile_fail", "run_fail") and not self.diagnostics:
            raise ValueError(f"{self.kind} requires diagnostics")
        if self.kind == "correct_fail" and not self.violating_size:
            raise ValueError("correct_fail requires the violating size")
        if self.kind == "scored":
            if len(self.per_size) != 3 or any(not s.passed for s in self.per_size):
                raise ValueError("scored results carry three passing sizes")

    @property
    def summary(self) -> str:
        if self.kind == "scored":
            return f"scored {self.score:.4f}"
        if self.kind == "correct_fail":
            return f"correct_fail at {self.violating_size}"
        return self.kind

    def to_json(self) -> dict:
        doc = {"kind": self.kind}
        if self.kind in ("compile_fail", "run_fail"):
            doc["diagnostics"] = self.diagnostics
        if self.kind == "correct_fail":
            doc.update(
                violating_size=self.violating_size,
                error_metric=self.error_metric,
                detail=self.detail,
            )
        if self.kind == "scored":
            doc["score"] = self.score
            doc["per_size"] = [
                {
                    "size": s.size_label,
                    "passed": s.passed,
                    "achieved": s.achieved,
                    "fraction": s.fraction,
                    "elapsed_seconds": s.elapsed_seconds,
                }
                for s in self.per_size
            ]
        return doc


@dataclass
class HistoryEntry:
    iteration: int
    kind: str
    summary: str


@dataclass
class FeedbackPacket:
    """Structured feedback for the mutator; in-distribution data only."""

    previous_source: str
    incumbent_source: str
    previous_result: EvalResult
    history: list
    task_prompt_digest: str
    unit: str = "GB/s"

    def serialize(self) -> str:
        lines = ["## previous candidate result"]
        r = self.previous_result
        if r.kind == "compile_fail":
            lines.append("compile failed; compiler diagnostics:")
            lines.append(r.diagnostics)
        elif r.kind == "run_fail":
            lines.append("run failed: " + r.diagnostics)
        elif r.kind == "correct_fail":
            lines.append("correctness failed: " + r.detail)
        else:
            lines.append(f"scored {r.score:.4f} (gated geometric mean of fraction-of-ceiling)")
            for s in r.per_size:
                value = s.achieved / 1e9
                lines.append(
                    f"  {s.size_label}: ok, {value:.2f} {self.unit}, fraction {s.fraction:.4f}"
                )
        lines.append("## recent history (oldest first)")
        for h in self.history:
            lines.append(f"  iteration {h.iteration}: {h.summary}")
        lines.append("## incumbent source")
        lines.append("```")
        lines.append(self.incumbent_source)
        lines.append("```")
        lines.append("## previous candidate source")
        lines.append("```")
        lines.append(self.previous_source)
        lines.append("```")
        lines.append(f"(task prompt digest {self.task_prompt_digest})")
        return "\n".join(lines)


@dataclass
class HeldOutVerdict:
    """End-of-run oversight result; structurally separate from FeedbackPacket."""

    passed: int
    fraction: float
    phi: float
    detail: str
    incumbent_elapsed: float
    seed_elapsed: float

    @property
    def speedup(self) -> float:
        return self.seed_elapsed / self.incumbent_elapsed


@dataclass
class IterationRecord:
    k: int
    kind: str  # EvalResult kind or mutator_fail
    candidate_hash: str | None
    promoted: bool
    best_score: float
    eval_result: EvalResult | None
    mutate_seconds: float = 0.0
    eval_seconds: float = 0.0


@dataclass
class RunLog:
    task_id: str
    profile: str
    chip_name: str
    mutator_id: str
    iterations: int
    seed: int
    prompt_version: str
    dialect: str = "native_plugin"
    records: list = field(default_factory=list)
    sources: dict = field(default_factory=dict)  # hash -> source text
    feedback_packets: list = field(default_factory=list)  # serialized, for audit
    final: dict = field(default_factory=dict)

    @property
    def incumbent_trajectory(self) -> list:
        return [(rec.k, rec.best_score) for rec in self.records]

    def save(self, out_dir) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        src_dir = out / "sources"
        src_dir.mkdir(exist_ok=True)
        ext = ".c" if self.dialect == "native_plugin" else ".txt"
        for h, text in self.sources.items():
            (src_dir / f"{h}{ext}").write_text(text)
        log_path = out / "run.jsonl"
        with open(log_path, "w") as fh:
            header = {
                "record": "header",
                "task": self.task_id,
                "profile": self.profile,
                "chip": self.chip_name,
                "mutator": self.mutator_id,
                "iterations": self.iterations,
                "seed": self.seed,
                "prompt_version": self.prompt_version,
            }
            fh.write(json.dumps(header) + "\n")
            for rec in self.records:
                doc = {
                    "record": "iteration",
                    "k": rec.k,
                    "kind": rec.kind,
                    "candidate_hash": rec.candidate_hash,
                    "promoted": rec.promoted,
                    "best_score": rec.best_score,
                    "mutate_seconds": rec.mutate_seconds,
                    "eval_seconds": rec.eval_seconds,
                }
                if rec.eval_result is not None:
                    doc["eval"] = rec.eval_result.to_json()
                fh.write(json.dumps(doc) + "\n")
            fh.write(json.dumps({"record": "final", **self.final}) + "\n")
        summary_path = out / "summary.json"
        summary_path.write_text(json.dumps(self.summary_row(), indent=2))
        return log_path

    def summary_row(self) -> dict:
        return {
            "task": self.task_id,
            "profile": self.profile,
            "mutator": self.mutator_id,
            "in_dist_score": self.final.get("in_dist_score"),
            "in_dist_speedup": self.final.get("in_dist_speedup"),
            "held_out_fraction": self.final.get("held_out_fraction"),
            "held_out_passed": self.final.get("held_out_passed"),
            "held_out_speedup": self.final.get("held_out_speedup"),
            "outcome": self.final.get("outcome"),
        }


def _run_and_verify(backend, co: CompileOutcome, task: TaskSpec, size: SizeConfig, seed: int, chip: ChipPeaks, purpose: str):
    """One size: run, verify, score.  Returns (SizeScore, detail) or raises BackendRunError."""
    inputs = generate_input(task, size, seed)
    outcome = backend.run(co, task, size, seed, inputs, purpose=purpose)
    ref = reference_outputs(task, size, seed)
    passed, metric, detail = verify(task, size, outcome.outputs, ref)
    elapsed = outcome.timing.median_seconds
    ach = roofline.achieved(task, size, elapsed)
    frac = ach / roofline.ceiling(task, size, chip)
    return SizeScore(size.label, passed, ach, frac, elapsed), metric, detail


def evaluate(candidate: Candidate, task: TaskSpec, backend, chip: ChipPeaks, seed: int, workdir=None) -> EvalResult:
    """Compile, run across the in-distribution sizes in order, verify, score.

    Every failure mode maps to a structured EvalResult; nothing escapes.
    """
    try:
        co = backend.compile(candidate, workdir)
    except Exception as exc:  # defensive: backend bugs must not kill a sweep
        return EvalResult("compile_fail", diagnostics=f"backend compile error: {exc}")
    if not co.ok:
        return EvalResult("compile_fail", diagnostics=co.diagnostics)
    per_size = []
    for size in task.in_dist:
        try:
            score, metric, detail = _run_and_verify(backend, co, task, size, seed, chip, "search")
        except BackendRunError as exc:
            return EvalResult("run_fail", diagnostics=str(exc))
        except Exception as exc:
            return EvalResult("run_fail", diagnostics=f"pipeline error: {exc}")
        if not score.passed:
            return EvalResult(
                "correct_fail", violating_size=size.label, error_metric=metric, detail=detail
            )
        per_size.append(score)
    score = in_dist_score([(s.passed, s.fraction) for s in per_size])
    return EvalResult("scored", score=score, per_size=per_size)


def promote(incumbent_score: float, new: EvalResult) -> bool:
    """Strict (1+1) rule: promote only on a strictly higher score."""
    if incumbent_score < 0:
        raise ValueError("incumbent score cannot be negative")
    return new.kind == "scored" and new.score > incumbent_score


def build_feedback(
    prev: Candidate,
    prev_result: EvalResult,
    incumbent: Candidate,
    history,
    task_prompt_digest: str = "",
    unit: str = "GB/s",
) -> FeedbackPacket:
    entries = list(history)
    if any(entries[i].iteration > entries[i + 1].iteration for i in range(len(entries) - 1)):
        raise ValueError("history entries must be ordered by iteration")
    return FeedbackPacket(
        previous_source=prev.source,
        incumbent_source=incumbent.source,
        previous_result=prev_result,
        history=entries,
        task_prompt_digest=task_prompt_digest,
        unit=unit,
    )


def held_out_tokens(task: TaskSpec) -> list:
    """Strings that uniquely identify the held-out size (for isolation scans).

    Parameter pairs shared with an in-distribution size (e.g. a chain count
    that repeats across configurations) are excluded; they are legitimately
    visible to the mutator.
    """
    in_pairs = {f"{k}={v}" for s in task.in_dist for k, v in s.params}
    tokens = [task.held_out.label]
    for k, v in task.held_out.params:
        pair = f"{k}={v}"
        if pair not in in_pairs and pair != task.held_out.label:
            tokens.append(pair)
    return tokens


def scan_for_held_out(texts, task: TaskSpec) -> list:
    """Mechanical leak scan: (text index, token) for every held-out token hit."""
    hits = []
    for i, text in enumerate(texts):
        for tok in held_out_tokens(task):
            if tok in text:
                hits.append((i, tok))
    return hits


def classify_outcome(in_dist_speedup, held_out_speedup, held_out_passed, seed_score) -> str:
    if not held_out_passed:
        return "FAIL"
    if held_out_speedup is not None and in_dist_speedup > 1.0 and held_out_speedup < 1.0:
        return "silent regression"
    if held_out_speedup is not None and held_out_speedup >= 1.05:
        return "generalizes"
    if in_dist_speedup < 1.05:
        return "saturated" if seed_score >= 0.5 else "flat"
    return "tied"


def run_sweep(
    task: TaskSpec,
    mutator,
    iterations: int,
    backend,
    chip: ChipPeaks,
    seed: int,
    seed_candidate: Candidate | None = None,
    out_dir=None,
    workdir=None,
) -> RunLog:
    """Algorithm: seed evaluation, K propose-evaluate-promote steps, one held-out verdict."""
    if iterations < 1:
        raise ValueError("a sweep needs at least one iteration")
    if workdir is None and out_dir is not None:
        workdir = Path(out_dir) / "build"
    if seed_candidate is None:
        if not task.seed_source:
            raise ConfigurationError(f"task {task.id} has no seed source loaded")
        seed_candidate = Candidate(task.seed_source, dialect=backend.dialect, origin="seed")
    prompt = mutator.task_prompt(task)
    unit = "GB/s" if task.bound_kind == "bandwidth" else "GFLOPS"
    log = RunLog(
        task_id=task.id,
        profile=task.profile,
        chip_name=chip.name,
        mutator_id=mutator.id,
        iterations=iterations,
        seed=seed,
        prompt_version=prompt.version,
        dialect=backend.dialect,
    )
    log.sources[seed_candidate.hash] = seed_candidate.source

    t0 = time.perf_counter()
    seed_result = evaluate(seed_candidate, task, backend, chip, seed, workdir)
    seed_eval_s = time.perf_counter() - t0
    if seed_result.kind != "scored":
        raise ConfigurationError(
            f"seed kernel for {task.id} failed its own evaluation "
            f"({seed_result.kind}): {seed_result.diagnostics or seed_result.detail}"
        )
    incumbent, best_score = seed_candidate, seed_result.score
    log.records.append(
        IterationRecord(0, "scored", seed_candidate.hash, False, best_score, seed_result, 0.0, seed_eval_s)
    )
    history = deque([HistoryEntry(0, "scored", seed_result.summary)], maxlen=HISTORY_DEPTH)
    prev_cand, prev_result = seed_candidate, seed_result

    for k in range(1, iterations + 1):
        packet = build_feedback(prev_cand, prev_result, incumbent, history, prompt.digest, unit)
        log.feedback_packets.append(packet.serialize())
        t0 = time.perf_counter()
        try:
            source = mutator.propose(prompt, packet)
        except MutatorFailure as exc:
            mutate_s = time.perf_counter() - t0
            log.records.append(
                IterationRecord(k, "mutator_fail", None, False, best_score, None, mutate_s, 0.0)
            )
            history.append(HistoryEntry(k, "mutator_fail", f"mutator failure: {exc}"))
            continue
        mutate_s = time.perf_counter() - t0
        cand = Candidate(
            source,
            dialect=backend.dialect,
            parent_hash=incumbent.hash,
            iteration=k,
            origin="mutator",
        )
        log.sources[cand.hash] = source
        t0 = time.perf_counter()
        result = evaluate(cand, task, backend, chip, seed, workdir)
        eval_s = time.perf_counter() - t0
        promoted = promote(best_score, result)
        if promoted:
            incumbent, best_score = cand, result.score
        log.records.append(
            IterationRecord(k, result.kind, cand.hash, promoted, best_score, result, mutate_s, eval_s)
        )
        history.append(HistoryEntry(k, result.kind, result.summary))
        prev_cand, prev_result = cand, result

    verdict = _held_out_verdict(task, backend, chip, seed, incumbent, seed_candidate, workdir)
    in_dist_speedup = best_score / seed_result.score if seed_result.score > 0 else float("nan")
    log.final = {
        "incumbent_hash": incumbent.hash,
        "in_dist_score": best_score,
        "seed_score": seed_result.score,
        "in_dist_speedup": in_dist_speedup,
        "held_out_passed": verdict.passed,
        "held_out_fraction": verdict.fraction,
        "phi": verdict.phi,
        "held_out_detail": verdict.detail,
        "held_out_speedup": verdict.speedup,
        "outcome": classify_outcome(
            in_dist_speedup, verdict.speedup, verdict.passed, seed_result.score
        ),
    }
    if out_dir is not None:
        log.save(out_dir)
        audit = getattr(mutator, "audit_log", None)
        if audit:
            with open(Path(out_dir) / "llm_audit.jsonl", "w") as fh:
                for entry in audit:
                    fh.write(json.dumps(entry) + "\n")
    return log


def _held_out_verdict(
    task: TaskSpec,
    backend,
    chip: ChipPeaks,
    seed: int,
    incumbent: Candidate,
    seed_candidate: Candidate,
    workdir=None,
) -> HeldOutVerdict:
    """Evaluate the final incumbent at the held-out size, exactly once.

    The seed is re-timed at the held-out size (same session) only when the
    incumbent differs, as the anchor for the held-out speedup; the anchor run
    is timing-only and never verified or fed back.
    """
    size = task.held_out
    co = backend.compile(incumbent, workdir)
    if not co.ok:
        return HeldOutVerdict(0, 0.0, 0.0, f"incumbent failed to recompile: {co.diagnostics}", 1.0, 1.0)
    try:
        score, metric, detail = _run_and_verify(
            backend, co, task, size, seed, chip, "held_out_eval"
        )
    except BackendRunError as exc:
        return HeldOutVerdict(0, 0.0, 0.0, f"held-out run failed: {exc}", 1.0, 1.0)
    if incumbent.hash == seed_candidate.hash:
        seed_elapsed = score.elapsed_seconds
    else:
        seed_co = backend.compile(seed_candidate, workdir)
        inputs = generate_input(task, size, seed)
        anchor = backend.run(seed_co, task, size, seed, inputs, purpose="held_out_anchor")
        seed_elapsed = anchor.timing.median_seconds
    phi = held_out_score(score.passed, score.fraction)
    return HeldOutVerdict(
        score.passed, score.fraction, phi, detail, score.elapsed_seconds, seed_elapsed
    )

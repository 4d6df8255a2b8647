"""Mutators: the HTTP chat-completions client and the deterministic scripted one.

A mutator turns (task prompt, feedback packet) into the next candidate source.
Any failure (timeout, bad status, zero or multiple code blocks, exhausted
script directory) raises MutatorFailure, which consumes the iteration with the
incumbent unchanged.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from .backend.abi import BINDINGS, descriptor_consts, descriptor_params
from .tasks.types import TaskSpec

PROMPT_VERSION = "prompt-v1"


class MutatorFailure(RuntimeError):
    """The mutator produced no usable candidate this iteration."""


@dataclass(frozen=True)
class TaskPrompt:
    text: str
    version: str = PROMPT_VERSION

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()[:12]


@dataclass
class MutatorConfig:
    kind: str = "http_llm"  # http_llm | scripted
    endpoint: str = ""
    model: str = ""
    auth_env: str = "KS_LLM_API_KEY"
    timeout_seconds: float = 120.0
    max_retries: int = 2
    temperature: float | None = None
    max_tokens: int | None = None
    script_dir: str = ""


TASK_STATEMENTS = {
    "saxpy": "Scale-and-add over two vectors: out[i] = a * x[i] + y[i]. Bandwidth smoke test.",
    "heat2d": "2D heat diffusion, 5-point stencil, Dirichlet boundary ring, fp32 grid.",
    "wave3d": "3D wave propagation, 7-point Laplacian with leapfrog time stepping, fixed boundary.",
    "nbody": "All-pairs softened gravity: accelerate, then kick-drift each body per step.",
    "hmc": "Hamiltonian Monte Carlo chains on a Gaussian target: leapfrog plus Metropolis accept.",
    "lbm": "D2Q9 lattice Boltzmann: periodic pull-stream then BGK relaxation, SoA fields.",
    "ising": "Checkerboard Metropolis spin flips with the frozen counter RNG; output must be byte-exact.",
    "lj": "Cell-list Lennard-Jones MD: clear/build cells, then 27-cell forces and kick-drift.",
    "gradshaf": "Picard relaxation of a flux grid: interior max reduction, then a variable-coefficient stencil.",
    "fft3d": "Forward 3D FFT on a power-of-two cube as three per-axis passes over ping-ponged buffers.",
}

DIALECT_RULES = """Candidate dialect rules:
- one self-contained C11 translation unit; #include "ks_abi.h" (mandatory, exports the ABI version)
- <math.h>, <stdint.h>, <string.h> allowed; no I/O, no heap allocation, stack only
- implement every entry symbol listed below with signature: int32_t NAME(ks_descriptor *d)
- return 0 on success; nonzero aborts the evaluation
- read sizes from d->params, constants from d->consts, buffers from d->buf (lengths in d->buf_len)
- single-entry tasks run all d->steps steps in one call; multi-entry tasks are
  sequenced by the harness once per step with d->step_index set"""


def render_task_prompt(task: TaskSpec) -> TaskPrompt:
    """System prompt: task statement, dialect, ABI contract, visible sizes, scoring.

    Built exclusively from in-distribution sizes; the held-out configuration
    never appears here.
    """
    binding = BINDINGS[task.id]
    size_lines = []
    for size in task.in_dist:
        size_lines.append(f"  - {size.label} ({size.steps} steps per timed repetition)")
    params = descriptor_params(task, task.in_dist[0])
    consts = descriptor_consts(task, task.in_dist[0])
    lines = [
        f"You optimize a compute kernel for the task '{task.id}' ({TASK_STATEMENTS[task.id]})",
        "",
        DIALECT_RULES,
        "",
        f"Entry symbols, in dispatch order: {', '.join(binding.entries)}",
        f"Descriptor params for the smallest size: {params}; consts: {tuple(round(c, 6) for c in consts)}",
        "",
        "Evaluated size configurations:",
        *size_lines,
        "",
        "Scoring: at each size the harness times 3 warmup + 10 timed repetitions",
        "(median kept), converts to throughput, and divides by the chip ceiling.",
        "Your score is the geometric mean of the three fractions, and it is zero",
        "if any size fails the task's correctness check against the CPU reference.",
        "A new candidate replaces the incumbent only if it scores strictly higher.",
        "Respond with exactly one fenced code block containing the full source.",
    ]
    text = "\n".join(lines)
    held = task.held_out.label
    if held in text:
        raise AssertionError("task prompt leaked the held-out size")
    return TaskPrompt(text)


_FENCE = re.compile(r"```[^\n]*\n(.*?)```", re.DOTALL)


def extract_code_block(text: str) -> str:
    """The body of exactly one fenced code block; anything else is a failure."""
    blocks = _FENCE.findall(text)
    if len(blocks) == 0:
        raise MutatorFailure("no code block in mutator response")
    if len(blocks) > 1:
        raise MutatorFailure(f"expected exactly one code block, got {len(blocks)}")
    return blocks[0]


class ScriptedMutator:
    """Deterministic mutator: files from a directory in lexicographic order."""

    def __init__(self, script_dir):
        self.script_dir = Path(script_dir)
        if not self.script_dir.is_dir():
            raise FileNotFoundError(f"script directory {script_dir} does not exist")
        self.files = sorted(p for p in self.script_dir.iterdir() if p.is_file())
        self._cursor = 0
        self.id = f"scripted:{self.script_dir.name}"

    def task_prompt(self, task: TaskSpec) -> TaskPrompt:
        return render_task_prompt(task)

    def propose(self, prompt: TaskPrompt, packet) -> str:
        if self._cursor >= len(self.files):
            raise MutatorFailure("script directory exhausted")
        path = self.files[self._cursor]
        self._cursor += 1
        return path.read_text()


def build_request_body(config: MutatorConfig, prompt: TaskPrompt, packet) -> dict:
    """Chat-completions request body; the auth token travels in a header, never here."""
    body = {
        "model": config.model,
        "messages": [
            {"role": "system", "content": prompt.text},
            {"role": "user", "content": packet.serialize()},
        ],
    }
    if config.temperature is not None:
        body["temperature"] = config.temperature
    if config.max_tokens is not None:
        body["max_tokens"] = config.max_tokens
    return body


class HttpMutator:
    """Chat-completions-style HTTP client with bounded retries."""

    def __init__(self, config: MutatorConfig):
        if not config.endpoint or not config.model:
            raise ValueError("http mutator needs an endpoint and a model name")
        token = os.environ.get(config.auth_env, "")
        if not token:
            raise RuntimeError(
                f"missing API key: environment variable {config.auth_env} is not set"
            )
        self.config = config
        self.id = f"http:{config.model}"
        self.audit_log: list = []  # request/response bodies; tokens never enter bodies

    def task_prompt(self, task: TaskSpec) -> TaskPrompt:
        return render_task_prompt(task)

    def propose(self, prompt: TaskPrompt, packet) -> str:
        body = build_request_body(self.config, prompt, packet)
        payload = json.dumps(body).encode()
        token = os.environ.get(self.config.auth_env, "")
        last_error = "unknown"
        for attempt in range(self.config.max_retries + 1):
            req = urllib.request.Request(
                self.config.endpoint,
                data=payload,
                headers={
                    "Content-Type": "application/json",
                    "Authorization": f"Bearer {token}",
                },
                method="POST",
            )
            try:
                with urllib.request.urlopen(req, timeout=self.config.timeout_seconds) as resp:
                    raw = resp.read().decode()
                self.audit_log.append({"request": body, "response": raw[:20000]})
                return self._parse(raw)
            except urllib.error.HTTPError as exc:
                last_error = f"HTTP {exc.code}"
                if 400 <= exc.code < 500:
                    break  # client errors will not improve on retry
            except (urllib.error.URLError, TimeoutError, OSError) as exc:
                last_error = str(exc)
            time.sleep(min(2.0**attempt, 8.0))
        self.audit_log.append({"request": body, "error": last_error})
        raise MutatorFailure(f"request failed after retries: {last_error}")

    def _parse(self, raw: str) -> str:
        try:
            doc = json.loads(raw)
            content = doc["choices"][0]["message"]["content"]
        except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
            raise MutatorFailure(f"unparseable mutator response: {exc}") from exc
        return extract_code_block(content)


def make_mutator(config: MutatorConfig):
    if config.kind == "scripted":
        return ScriptedMutator(config.script_dir)
    if config.kind == "http_llm":
        return HttpMutator(config)
    raise ValueError(f"unknown mutator kind {config.kind!r}")

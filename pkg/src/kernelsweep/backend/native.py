"""Native plugin backend: compile candidate C sources to shared objects and run them.

Candidate sources are untrusted text; compilation happens in a sandboxed
work directory and nothing from the candidate executes at compile time
beyond the compiler itself.  Execution is in-process by default (fast, with
a thread watchdog that abandons runaway calls) or in a killable subprocess
with --subprocess-isolation semantics.
"""

from __future__ import annotations

import ctypes
import os
import re
import shutil
import subprocess
import sys
import tempfile
import threading
from pathlib import Path

import numpy as np

from ..buffers import FieldBuffer
from ..tasks.types import SizeConfig, TaskSpec
from ..tasks.inputs import OUTPUT_BUFFERS
from . import BackendRunError, Candidate, CompileOutcome, RunOutcome, RunRecord, run_protocol
from .abi import ABI_VERSION, BINDINGS, build_descriptor

DEFAULT_COMPILE_TIMEOUT = 60.0
DEFAULT_WATCHDOG = 30.0


class ToolchainError(RuntimeError):
    """The native compiler is unavailable; detected at backend construction."""


def _default_header_path() -> Path:
    return Path(__file__).resolve().parents[3] / "seeds" / "ks_abi.h"


class NativeBackend:
    dialect = "native_plugin"

    def __init__(
        self,
        header_path=None,
        cc: str | None = None,
        cflags=None,
        compile_timeout: float = DEFAULT_COMPILE_TIMEOUT,
        watchdog_seconds: float = DEFAULT_WATCHDOG,
        subprocess_isolation: bool = False,
    ):
        self.cc = cc or os.environ.get("KS_CC", "cc")
        env_flags = os.environ.get("KS_CFLAGS")
        if cflags is not None:
            self.cflags = list(cflags)
        elif env_flags:
            self.cflags = env_flags.split()
        else:
            self.cflags = ["-O3", "-shared", "-fPIC"]
        self.compile_timeout = compile_timeout
        self.watchdog_seconds = watchdog_seconds
        self.subprocess_isolation = subprocess_isolation
        self.header_path = Path(header_path) if header_path else _default_header_path()
        self.runs: list[RunRecord] = []
        if shutil.which(self.cc) is None:
            raise ToolchainError(f"compiler {self.cc!r} not found on PATH")
        if not self.header_path.is_file():
            raise ToolchainError(f"candidate ABI header not found at {self.header_path}")
        self._check_header_version()

    def _check_header_version(self):
        text = self.header_path.read_text()
        m = re.search(r"#define\s+KS_ABI_VERSION\s+(\d+)", text)
        if not m or int(m.group(1)) != ABI_VERSION:
            found = m.group(1) if m else "none"
            raise ToolchainError(
                f"ABI header version {found} does not match harness version {ABI_VERSION}"
            )

    def compile(self, candidate: Candidate, workdir=None) -> CompileOutcome:
        """Compile to a dlopen-able shared object; diagnostics are verbatim stderr."""
        base = Path(workdir) if workdir else Path(tempfile.mkdtemp(prefix="kscand-"))
        base.mkdir(parents=True, exist_ok=True)
        shutil.copy(self.header_path, base / "ks_abi.h")
        src = base / f"candidate_{candidate.hash}.c"
        src.write_text(candidate.source)
        out = base / f"candidate_{candidate.hash}.so"
        cmd = [self.cc, *self.cflags, "-I", str(base), "-o", str(out), str(src), "-lm"]
        try:
            proc = subprocess.run(
                cmd, capture_output=True, text=True, timeout=self.compile_timeout, cwd=base
            )
        except subprocess.TimeoutExpired:
            return CompileOutcome(False, "compile timeout")
        if proc.returncode != 0:
            diag = proc.stderr.strip() or proc.stdout.strip() or "compiler failed with no output"
            return CompileOutcome(False, diag)
        return CompileOutcome(True, proc.stderr.strip(), str(out))

    def run(
        self,
        outcome: CompileOutcome,
        task: TaskSpec,
        size: SizeConfig,
        seed: int,
        inputs: list[FieldBuffer],
        purpose: str = "search",
    ) -> RunOutcome:
        if not outcome.ok or not outcome.artifact_path:
            raise BackendRunError("cannot run a failed compile")
        self.runs.append(RunRecord(task.id, size.label, purpose))
        if self.subprocess_isolation:
            return _run_subprocess(
                outcome.artifact_path, task, size, seed, self.watchdog_seconds
            )
        return run_artifact_in_process(
            outcome.artifact_path, task, size, seed, inputs, self.watchdog_seconds
        )


def run_artifact_in_process(
    artifact_path: str,
    task: TaskSpec,
    size: SizeConfig,
    seed: int,
    inputs: list[FieldBuffer],
    watchdog_seconds: float | None,
) -> RunOutcome:
    # lib must stay referenced while the entry pointers are live
    lib, entries = _load_entries(artifact_path, task)  # noqa: F841
    pristine = [np.ascontiguousarray(b.data) for b in inputs]
    live = [np.empty_like(a) for a in pristine]
    binding = BINDINGS[task.id]
    perm = list(range(len(live)))

    def reset():
        for dst, src in zip(live, pristine):
            np.copyto(dst, src)
        perm[:] = range(len(live))

    def run_once():
        desc = build_descriptor(task, size, seed, [live[p] for p in perm])
        if binding.plan == "single":
            _call(entries[0], desc, task)
            return
        for step in range(size.steps):
            desc.step_index = step
            for fn in entries:
                _call(fn, desc, task)
                if binding.swap == "entry":
                    _swap01(desc, perm, live)
            if binding.swap == "step":
                _swap01(desc, perm, live)

    holder: dict = {}

    def worker():
        try:
            holder["timing"] = run_protocol(run_once, reset=reset)
        except BaseException as exc:  # propagated to the caller below
            holder["error"] = exc

    if watchdog_seconds is None:
        worker()
    else:
        t = threading.Thread(target=worker, daemon=True)
        t.start()
        t.join(watchdog_seconds)
        if t.is_alive():
            # the stuck call cannot be cancelled in-process; abandon the thread
            raise BackendRunError(
                f"watchdog timeout after {watchdog_seconds:.0f}s at {size.label}"
            )
    if "error" in holder:
        err = holder["error"]
        if isinstance(err, BackendRunError):
            raise err
        raise BackendRunError(f"candidate execution failed: {err}")
    outputs = [
        FieldBuffer(inputs[j].element_kind, inputs[j].extents, live[perm[j]].copy())
        for j in OUTPUT_BUFFERS[task.id]
    ]
    return RunOutcome(outputs, holder["timing"])


def _swap01(desc, perm, live):
    perm[0], perm[1] = perm[1], perm[0]
    desc.buf[0] = live[perm[0]].ctypes.data
    desc.buf[1] = live[perm[1]].ctypes.data
    desc.buf_len[0] = live[perm[0]].size
    desc.buf_len[1] = live[perm[1]].size


def _load_entries(artifact_path: str, task: TaskSpec):
    try:
        lib = ctypes.CDLL(artifact_path)
    except OSError as exc:
        raise BackendRunError(f"plugin load failure: {exc}") from exc
    try:
        version_fn = lib.ks_abi_version
    except AttributeError:
        raise BackendRunError(
            "plugin does not export ks_abi_version; include the candidate ABI header"
        ) from None
    version_fn.restype = ctypes.c_uint32
    version_fn.argtypes = []
    got = int(version_fn())
    if got != ABI_VERSION:
        raise BackendRunError(
            f"ABI version mismatch: plugin was built for version {got}, harness speaks {ABI_VERSION}"
        )
    entries = {}
    for name in BINDINGS[task.id].entries:
        try:
            fn = getattr(lib, name)
        except AttributeError:
            raise BackendRunError(f"entry symbol {name!r} not found in plugin") from None
        fn.restype = ctypes.c_int32
        fn.argtypes = [ctypes.c_void_p]
        entries[name] = fn
    return lib, [entries[n] for n in BINDINGS[task.id].entries]


def _call(fn, desc, task):
    rc = fn(ctypes.byref(desc))
    if rc != 0:
        raise BackendRunError(f"candidate for {task.id} reported error code {rc}")


def _run_subprocess(
    artifact_path: str, task: TaskSpec, size: SizeConfig, seed: int, watchdog_seconds: float
) -> RunOutcome:
    """Execute one (artifact, size) run in a killable worker process."""
    from .worker import decode_result  # local import to keep worker standalone

    with tempfile.TemporaryDirectory(prefix="ksrun-") as tmp:
        out_path = Path(tmp) / "result.npz"
        cmd = [
            sys.executable,
            "-m",
            "kernelsweep.backend.worker",
            artifact_path,
            task.id,
            task.profile,
            size.label,
            str(seed),
            str(out_path),
        ]
        try:
            proc = subprocess.run(
                cmd, capture_output=True, text=True, timeout=watchdog_seconds
            )
        except subprocess.TimeoutExpired:
            raise BackendRunError(
                f"watchdog timeout after {watchdog_seconds:.0f}s at {size.label} (subprocess killed)"
            ) from None
        if proc.returncode != 0:
            tail = (proc.stderr or "").strip().splitlines()[-3:]
            raise BackendRunError(
                f"candidate subprocess failed (exit {proc.returncode}): " + " | ".join(tail)
            )
        return decode_result(out_path, task)

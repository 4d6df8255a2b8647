"""Operator surface: validate seed kernels, run sweeps, aggregate reports.

Exit codes: 0 success, 1 benchmark or configuration error, 2 sweep completed
but the held-out gate failed (CI can key on oversight).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import report as report_mod
from . import roofline
from .backend import Candidate
from .backend.native import NativeBackend, ToolchainError
from .backend.oracle import ORACLE_SEED_SOURCE, OracleBackend
from .evolve import ConfigurationError, evaluate, run_sweep
from .mutators import MutatorConfig, MutatorFailure, make_mutator
from .tasks import TASK_IDS, build_task, export_registry_json, iteration_budget
from .tasks.registry import default_seed_dir


def load_config_file(path) -> dict:
    """Flat key = value config; '#' starts a comment."""
    cfg = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"bad config line: {raw!r}")
        key, val = line.split("=", 1)
        cfg[key.strip()] = val.strip()
    return cfg


def _resolve(flag_value, env_key: str, cfg: dict, cfg_key: str, default=None):
    """Precedence: flags > environment > config file > default."""
    if flag_value is not None:
        return flag_value
    if env_key and os.environ.get(env_key):
        return os.environ[env_key]
    if cfg_key in cfg:
        return cfg[cfg_key]
    return default


def _chip_from_args(args, cfg) -> roofline.ChipPeaks:
    if getattr(args, "chip_peaks", None):
        gflops, gbs = (float(x) for x in args.chip_peaks.split(","))
        return roofline.ChipPeaks("custom", gflops, gbs)
    name = _resolve(args.chip, "KS_CHIP", cfg, "chip", "m1pro")
    registry = roofline.load_chip_registry(getattr(args, "chip_file", None))
    if name not in registry:
        raise ConfigurationError(
            f"chip {name!r} not in registry ({sorted(registry)}); "
            "use --chip-peaks GFLOPS,GBS for unlisted machines"
        )
    return registry[name]


def _native_backend(args) -> NativeBackend:
    seed_dir = Path(args.seed_dir) if args.seed_dir else default_seed_dir()
    return NativeBackend(
        header_path=seed_dir / "ks_abi.h",
        subprocess_isolation=getattr(args, "subprocess_isolation", False),
    )


def _validate_one(task_id, args, chip, seed_dir):
    """One task with its own backend instance (safe under --jobs)."""
    try:
        task = build_task(task_id, args.profile, seed_dir=seed_dir, load_seed=True)
        backend = _native_backend(args)
    except (FileNotFoundError, KeyError, ToolchainError) as exc:
        return task_id, False, str(exc)
    result = evaluate(Candidate(task.seed_source, origin="seed"), task, backend, chip, args.seed)
    if result.kind == "scored":
        fracs = ", ".join(f"{s.size_label}: {s.fraction:.3g}" for s in result.per_size)
        return task_id, True, f"score={result.score:.4g}  ({fracs})"
    return task_id, False, f"{result.kind}: {result.diagnostics or result.detail}"


def cmd_validate(args) -> int:
    """Compile and evaluate every seed kernel; all must come back scored."""
    cfg = load_config_file(args.config) if args.config else {}
    chip = _chip_from_args(args, cfg)
    try:
        _native_backend(args)  # probe toolchain and header once, up front
    except ToolchainError as exc:
        print(f"toolchain error: {exc}", file=sys.stderr)
        return 1
    task_ids = [args.task] if args.task else list(TASK_IDS)
    seed_dir = Path(args.seed_dir) if args.seed_dir else None
    if args.jobs > 1:
        # parallel tasks trade timing fidelity for wall clock; validate only
        # gates on correctness, so that is an acceptable trade here
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(lambda t: _validate_one(t, args, chip, seed_dir), task_ids))
    else:
        results = [_validate_one(t, args, chip, seed_dir) for t in task_ids]
    failures = []
    for task_id, ok, detail in results:
        print(f"{task_id:10s} {'ok   ' if ok else 'FAIL '} {detail}")
        if not ok:
            failures.append(task_id)
    total = len(task_ids)
    print(f"{total - len(failures)}/{total} seeds pass")
    return 1 if failures else 0


def _build_mutator(args, cfg):
    kind = _resolve(args.mutator, "KS_MUTATOR", cfg, "mutator", None)
    if kind is None:
        raise ConfigurationError("no mutator selected (use --mutator scripted|http)")
    if kind == "scripted":
        script_dir = _resolve(args.script_dir, "KS_SCRIPT_DIR", cfg, "script_dir", None)
        if not script_dir:
            raise ConfigurationError("scripted mutator needs --script-dir")
        return make_mutator(MutatorConfig(kind="scripted", script_dir=script_dir))
    if kind == "http":
        config = MutatorConfig(
            kind="http_llm",
            endpoint=_resolve(args.endpoint, "KS_LLM_ENDPOINT", cfg, "endpoint", ""),
            model=_resolve(args.model, "KS_LLM_MODEL", cfg, "model", ""),
            auth_env=_resolve(None, "", cfg, "auth_env", "KS_LLM_API_KEY"),
            timeout_seconds=float(_resolve(None, "KS_LLM_TIMEOUT", cfg, "timeout_seconds", 120)),
            max_retries=int(_resolve(None, "", cfg, "max_retries", 2)),
            temperature=(
                float(cfg["temperature"]) if "temperature" in cfg else None
            ),
        )
        try:
            return make_mutator(config)
        except (RuntimeError, ValueError) as exc:
            raise ConfigurationError(str(exc)) from exc
    raise ConfigurationError(f"unknown mutator kind {kind!r}")


def cmd_run(args) -> int:
    cfg = load_config_file(args.config) if args.config else {}
    chip = _chip_from_args(args, cfg)
    try:
        mutator = _build_mutator(args, cfg)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    seed_dir = Path(args.seed_dir) if args.seed_dir else None
    backend_kind = _resolve(args.backend, "KS_BACKEND", cfg, "backend", "native")
    try:
        if backend_kind == "native":
            task = build_task(args.task, args.profile, seed_dir=seed_dir, load_seed=True)
            backend = _native_backend(args)
            seed_candidate = None  # run_sweep builds it from task.seed_source
        elif backend_kind == "oracle":
            task = build_task(args.task, args.profile)
            backend = OracleBackend(chip)
            seed_candidate = Candidate(ORACLE_SEED_SOURCE, dialect="oracle", origin="seed")
        else:
            raise ConfigurationError(f"unknown backend {backend_kind!r}")
    except (FileNotFoundError, ToolchainError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    iters = args.iters if args.iters is not None else iteration_budget(task.id)
    out_dir = Path(args.out) if args.out else None
    try:
        log = run_sweep(
            task,
            mutator,
            iters,
            backend,
            chip,
            args.seed,
            seed_candidate=seed_candidate,
            out_dir=out_dir,
        )
    except (ConfigurationError, MutatorFailure) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    row = log.summary_row()
    frac = row["held_out_fraction"]
    print(
        f"{row['task']}: in-dist {report_mod.format_speedup(row['in_dist_speedup'])}, "
        f"held-out {report_mod.format_fraction(frac) if frac is not None else '--'} of ceiling, "
        f"held-out {report_mod.format_speedup(row['held_out_speedup'])}, "
        f"outcome: {row['outcome']}"
    )
    if out_dir and args.emit == "convergence":
        parsed = report_mod.load_run_log(out_dir / "run.jsonl")
        report_mod.write_convergence_csv(parsed, out_dir / "convergence.csv")
        report_mod.render_convergence_figure([parsed], out_dir / "convergence.png")
        print(f"convergence data written to {out_dir}/convergence.csv and .png")
    return 2 if not log.final["held_out_passed"] else 0


def cmd_report(args) -> int:
    logs = []
    for path in args.run_logs:
        try:
            logs.append(report_mod.load_run_log(path))
        except (OSError, ValueError) as exc:
            print(f"cannot parse {path}: {exc}", file=sys.stderr)
            return 1
    rows = report_mod.summary_rows(logs)
    print(report_mod.render_table(rows))
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        report_mod.write_summary_json(rows, out / "summary.json")
        report_mod.render_convergence_figure(logs, out / "convergence.png")
        print(f"wrote {out}/summary.json and {out}/convergence.png")
    return 0


def cmd_tasks(args) -> int:
    print(export_registry_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kernelsweep", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", choices=("desk", "paper"), default="desk")
    common.add_argument("--chip", default=None, help="chip registry key (default m1pro)")
    common.add_argument("--chip-peaks", default=None, metavar="GFLOPS,GBS")
    common.add_argument("--chip-file", default=None, help="chip registry JSON override")
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--seed-dir", default=None, help="directory holding seed kernels + ABI header")
    common.add_argument("--config", default=None, help="key = value config file")
    common.add_argument("--subprocess-isolation", action="store_true")

    v = sub.add_parser("validate", parents=[common], help="compile and verify every seed kernel")
    v.add_argument("--task", choices=TASK_IDS, default=None)
    v.add_argument("--jobs", type=int, default=1, help="validate tasks in parallel (separate backends)")
    v.set_defaults(fn=cmd_validate)

    r = sub.add_parser("run", parents=[common], help="run one evolution sweep")
    r.add_argument("--task", choices=TASK_IDS, required=True)
    r.add_argument("--mutator", choices=("scripted", "http"), default=None)
    r.add_argument("--script-dir", default=None)
    r.add_argument("--model", default=None)
    r.add_argument("--endpoint", default=None)
    r.add_argument("--iters", type=int, default=None)
    r.add_argument("--backend", choices=("native", "oracle"), default=None)
    r.add_argument("--out", default=None)
    r.add_argument("--emit", choices=("summary", "convergence"), default="summary")
    r.set_defaults(fn=cmd_run)

    rep = sub.add_parser("report", help="aggregate run logs into a table")
    rep.add_argument("run_logs", nargs="+")
    rep.add_argument("--out-dir", default=None)
    rep.set_defaults(fn=cmd_report)

    t = sub.add_parser("tasks", help="dump the versioned task registry as JSON")
    t.set_defaults(fn=cmd_tasks)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

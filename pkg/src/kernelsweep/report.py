"""Reporting: summary tables (text + JSON), convergence CSV, and figures.

Figures are batch artifacts rendered to files next to the delimited output;
nothing here opens a display.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def format_fraction(f: float) -> str:
    """Fraction-of-ceiling as a percent string: 0.93 -> '93%', 0.085 -> '8.5%'."""
    pct = f * 100.0
    if pct >= 10.0:
        return f"{pct:.0f}%"
    if pct >= 1.0:
        return f"{pct:.1f}%"
    return f"{pct:.2f}%"


def format_speedup(x) -> str:
    if x is None or x != x:  # None or NaN
        return "--"
    return f"{x:.2f}x"


def load_run_log(path) -> dict:
    """Parse a run.jsonl into {header, iterations, final}."""
    header, final = None, None
    iterations = []
    with open(path) as fh:
        for line in fh:
            doc = json.loads(line)
            kind = doc.pop("record")
            if kind == "header":
                header = doc
            elif kind == "iteration":
                iterations.append(doc)
            elif kind == "final":
                final = doc
    if header is None or final is None:
        raise ValueError(f"run log {path} is missing header or final record")
    return {"header": header, "iterations": iterations, "final": final}


def summary_rows(logs: list) -> list:
    rows = []
    for log in logs:
        h, f = log["header"], log["final"]
        rows.append(
            {
                "task": h["task"],
                "profile": h["profile"],
                "mutator": h["mutator"],
                "in_dist_x": f.get("in_dist_speedup"),
                "held_out_fraction": f.get("held_out_fraction"),
                "held_out_x": f.get("held_out_speedup"),
                "outcome": f.get("outcome"),
            }
        )
    return rows


def render_table(rows: list) -> str:
    """Human table with the four headline columns."""
    profiles = {r["profile"] for r in rows}
    header = f"{'task':10s} {'mutator':18s} {'in-dist x':>9s} {'held-out frac':>13s} {'held-out x':>10s}  outcome"
    lines = [header, "-" * len(header)]
    for r in rows:
        frac = r["held_out_fraction"]
        lines.append(
            f"{r['task']:10s} {r['mutator'][:18]:18s} "
            f"{format_speedup(r['in_dist_x']):>9s} "
            f"{format_fraction(frac) if frac is not None else '--':>13s} "
            f"{format_speedup(r['held_out_x']):>10s}  {r['outcome']}"
        )
    if len(profiles) > 1:
        lines.append(f"WARNING: rows mix profiles {sorted(profiles)}; speedups are not comparable")
    return "\n".join(lines)


def write_summary_json(rows: list, path):
    Path(path).write_text(json.dumps(rows, indent=2))


def convergence_series(log: dict) -> list:
    """Per-iteration rows: best-so-far / seed, the shape of the trajectory plots."""
    seed_score = log["final"].get("seed_score") or 0.0
    rows = []
    for it in log["iterations"]:
        best = it["best_score"]
        rows.append(
            {
                "iteration": it["k"],
                "kind": it["kind"],
                "promoted": it["promoted"],
                "best_score": best,
                "best_over_seed": (best / seed_score) if seed_score > 0 else float("nan"),
            }
        )
    return rows


def write_convergence_csv(log: dict, path):
    rows = convergence_series(log)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["iteration", "kind", "promoted", "best_score", "best_over_seed"]
        )
        writer.writeheader()
        writer.writerows(rows)


def render_convergence_figure(logs: list, path):
    """Best-so-far/seed vs iteration, one panel per run; failed candidates
    appear as x marks on the y=1 line."""
    n = len(logs)
    fig, axes = plt.subplots(1, n, figsize=(4.2 * n, 3.2), squeeze=False)
    for ax, log in zip(axes[0], logs):
        rows = convergence_series(log)
        xs = [r["iteration"] for r in rows]
        ys = [r["best_over_seed"] for r in rows]
        ax.step(xs, ys, where="post", lw=1.8)
        fail_x = [r["iteration"] for r in rows if r["kind"] not in ("scored",)]
        ax.plot(fail_x, [1.0] * len(fail_x), "x", color="gray", ms=6)
        promo = [(r["iteration"], r["best_over_seed"]) for r in rows if r["promoted"]]
        if promo:
            bx, by = promo[-1]
            ax.plot([bx], [by], "o", ms=7, mfc="none")
        ax.axhline(1.0, color="black", lw=0.6, alpha=0.4)
        ax.set_title(f"{log['header']['task']} ({log['header']['mutator']})", fontsize=9)
        ax.set_xlabel("iteration")
        ax.set_ylabel("best-so-far / seed")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path

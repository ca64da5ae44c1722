"""Benchmark runner: expands flag lists into a run matrix and executes it.

Each comma-separated flag contributes one axis of the matrix.  Replication
levels combine with their counts, so ``--replication none,fixed,smart --r 5,10
--rmax 5,10`` yields five levels: none, fixed(5), fixed(10), smart(5),
smart(10).  Every run gets a seed derived from the master seed, its cell
index and its execution index, so any single run can be repeated alone.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .metrics import auc, mtfauc
from .optimizer import ExperimentConfig, export_trace, run
from .problem import FUNCTIONS
from .surrogates import SURROGATES

__all__ = [
    "SUMMARY_FIELDS",
    "TRACE_FIELDS",
    "Cell",
    "build_matrix",
    "derive_seed",
    "main",
    "read_summary_csv",
    "run_matrix",
    "write_summary_csv",
    "write_trace_csv",
]

TRACE_FIELDS = ["run_id", "eval_index", "bsms_true", "bsms_mean"]
SUMMARY_FIELDS = [
    "function", "d", "fiv", "noise", "surrogate", "replication", "r_or_rmax", "seed",
    "auc", "mtfauc", "final_bsms_true", "total_evals", "selected_variables", "status",
]
_INT_FIELDS = {"d", "r_or_rmax", "seed", "total_evals"}
_FLOAT_FIELDS = {"fiv", "noise", "auc", "mtfauc", "final_bsms_true"}

DEFAULTS = {
    "function": ",".join(FUNCTIONS),
    "dim": "30",
    "fiv": "0.5",
    "noise": "0,0.05,0.1,0.25",
    "surrogate": ",".join(SURROGATES),
    "replication": "none,fixed,smart",
    "r": "5,10",
    "rmax": "5,10",
    "alpha": 0.05,
    "budget": 1000,
    "pool_size": None,
    "k_prime": 3,
    "mars_knots": "20",
    "executions": 30,
    "seed": 0,
    "out": "results",
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    index: int
    function: str
    d: int
    fiv: float
    noise: float
    surrogate: str
    replication: str
    r: int  # 0 for no replication

    def config(self, seed: int, **common) -> ExperimentConfig:
        return ExperimentConfig(
            function=self.function, d=self.d, fiv=self.fiv, noise=self.noise,
            surrogate=self.surrogate, replication=self.replication, r=max(self.r, 1),
            seed=seed, **common,
        )


def derive_seed(master: int, cell: int, execution: int) -> int:
    return int(np.random.SeedSequence([master, cell, execution]).generate_state(1, np.uint32)[0])


def _split(value, cast=str) -> list:
    if isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [v.strip() for v in str(value).split(",") if v.strip()]
    try:
        return [cast(v) for v in items]
    except ValueError as exc:
        raise ConfigError(f"cannot parse {value!r}: {exc}") from None


def build_matrix(opts: dict) -> list:
    functions = [f.lower() for f in _split(opts["function"])]
    for f in functions:
        if f not in FUNCTIONS:
            raise ConfigError(f"unknown function {f!r}; choose from {', '.join(FUNCTIONS)}")
    surrogates = [s.lower() for s in _split(opts["surrogate"])]
    for s in surrogates:
        if s not in SURROGATES:
            raise ConfigError(f"unknown surrogate {s!r}; choose from {', '.join(SURROGATES)}")
    levels = []
    for rep in _split(opts["replication"]):
        rep = rep.lower()
        if rep == "none":
            levels.append(("none", 0))
        elif rep == "fixed":
            levels += [("fixed", r) for r in _split(opts["r"], int)]
        elif rep == "smart":
            levels += [("smart", r) for r in _split(opts["rmax"], int)]
        else:
            raise ConfigError(f"unknown replication {rep!r}; choose from none, fixed, smart")
    if any(r < 1 for rep, r in levels if rep != "none"):
        raise ConfigError("replication counts must be at least 1")
    axes = itertools.product(functions, _split(opts["dim"], int), _split(opts["fiv"], float),
                             _split(opts["noise"], float), surrogates, levels)
    cells = [Cell(i, f, d, fiv, noise, s, rep, r)
             for i, (f, d, fiv, noise, s, (rep, r)) in enumerate(axes)]
    for cell in cells:
        try:
            cell.config(0, **_common(opts))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return cells


def _common(opts: dict) -> dict:
    knots = str(opts["mars_knots"])
    return {
        "alpha": float(opts["alpha"]),
        "budget": int(opts["budget"]),
        "pool_size": None if opts["pool_size"] is None else int(opts["pool_size"]),
        "k_prime": int(opts["k_prime"]),
        "mars_knots": knots if knots == "leaves" else int(knots),
    }


def _execute(task):
    cell, execution, seed, common = task
    run_id = f"c{cell.index:04d}_e{execution:03d}"
    row = {
        "function": cell.function, "d": cell.d, "fiv": cell.fiv, "noise": cell.noise,
        "surrogate": cell.surrogate, "replication": cell.replication, "r_or_rmax": cell.r,
        "seed": seed,
    }
    try:
        trace = run(cell.config(seed, **common))
    except Exception as exc:  # a failed run must not take the matrix down
        row.update(auc=float("nan"), mtfauc=float("nan"), final_bsms_true=float("nan"),
                   total_evals=0, selected_variables="", status=f"error: {type(exc).__name__}: {exc}")
        return run_id, [], row
    selected = trace.selected_variables
    row.update(
        auc=auc(trace), mtfauc=mtfauc(trace), final_bsms_true=float(trace.bsms_true[-1]),
        total_evals=len(trace),
        selected_variables="" if selected is None else ";".join(str(v) for v in sorted(selected)),
        status="ok",
    )
    return run_id, export_trace(trace), row


def _fmt(value):
    return repr(value) if isinstance(value, float) else value


def write_trace_csv(path, run_id: str, rows) -> None:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(TRACE_FIELDS)
            for i, t, m in rows:
                w.writerow([run_id, i, repr(float(t)), repr(float(m))])
    except OSError as exc:
        raise OSError(f"cannot write trace {path}: {exc}") from exc


def write_summary_csv(path, rows) -> None:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.DictWriter(fh, SUMMARY_FIELDS)
            w.writeheader()
            for row in rows:
                w.writerow({k: _fmt(row[k]) for k in SUMMARY_FIELDS})
    except OSError as exc:
        raise OSError(f"cannot write summary {path}: {exc}") from exc


def read_summary_csv(path) -> list:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        for k in _INT_FIELDS:
            row[k] = int(row[k])
        for k in _FLOAT_FIELDS:
            row[k] = float(row[k])
    return rows


def run_matrix(cells, executions: int, master_seed: int, common: dict, jobs: int = 1):
    """Yield ``(run_id, trace_rows, summary_row)`` in matrix order."""
    tasks = [(cell, e, derive_seed(master_seed, cell.index, e), common)
             for cell in cells for e in range(executions)]
    if jobs <= 1 or len(tasks) <= 1:
        yield from map(_execute, tasks)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_execute, tasks)


def _stats(values) -> str:
    v = np.asarray([x for x in values if np.isfinite(x)], dtype=float)
    if v.size == 0:
        return "n/a"
    q1, q2, q3 = np.percentile(v, [25, 50, 75])
    var = float(v.var(ddof=1)) if v.size > 1 else 0.0
    return f"{v.mean():.4g} {var:.3g} {q1:.4g}/{q2:.4g}/{q3:.4g}"


def print_table(cells, rows, out=None) -> None:
    out = out or sys.stdout
    by_cell: dict = {}
    for row in rows:
        key = (row["function"], row["d"], row["fiv"], row["noise"], row["surrogate"],
               row["replication"], row["r_or_rmax"])
        by_cell.setdefault(key, []).append(row)
    print("cell | mtfauc mean var q1/q2/q3 | final f mean var q1/q2/q3 | failed", file=out)
    for cell in cells:
        key = (cell.function, cell.d, cell.fiv, cell.noise, cell.surrogate, cell.replication, cell.r)
        group = by_cell.get(key, [])
        label = f"{cell.function} d={cell.d} fiv={cell.fiv} np={cell.noise} {cell.surrogate} {cell.replication}"
        if cell.replication != "none":
            label += f"({cell.r})"
        failed = sum(r["status"] != "ok" for r in group)
        print(f"{label} | {_stats(r['mtfauc'] for r in group)} | "
              f"{_stats(r['final_bsms_true'] for r in group)} | {failed}", file=out)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="surropt", description=__doc__.splitlines()[0])
    p.add_argument("--function", help="comma-separated test functions")
    p.add_argument("--dim", help="comma-separated dimensions")
    p.add_argument("--fiv", help="comma-separated fractions of important variables")
    p.add_argument("--noise", help="comma-separated noise levels in [0, 1)")
    p.add_argument("--surrogate", help="comma-separated surrogates")
    p.add_argument("--replication", help="comma-separated policies: none, fixed, smart")
    p.add_argument("--r", help="replication counts for fixed replication")
    p.add_argument("--rmax", help="replication caps for smart replication")
    p.add_argument("--alpha", type=float, help="confidence-interval significance level")
    p.add_argument("--budget", type=int, help="black-box evaluations per run")
    p.add_argument("--pool-size", type=int, dest="pool_size", help="candidate pool size (default 100*d)")
    p.add_argument("--k-prime", type=int, dest="k_prime", help="candidates per iteration")
    p.add_argument("--mars-knots", dest="mars_knots", help="knots per dimension for plain MARS, or 'leaves'")
    p.add_argument("--executions", type=int, help="runs per cell")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--out", help="output directory")
    p.add_argument("--config", help="JSON file with any of the options above")
    p.add_argument("--jobs", type=int, help="worker processes (default $SURROPT_JOBS or 1)")
    p.add_argument("--list-functions", action="store_true", help="print the test function names and exit")
    return p


def _resolve(ns: argparse.Namespace) -> dict:
    opts = dict(DEFAULTS)
    if ns.config:
        try:
            with open(ns.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {ns.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        for key, value in loaded.items():
            key = key.replace("-", "_")
            if key not in DEFAULTS and key != "jobs":
                raise ConfigError(f"unknown config key {key!r}")
            opts[key] = value
    for key, value in vars(ns).items():
        if key in DEFAULTS and value is not None:
            opts[key] = value
    jobs = ns.jobs if ns.jobs is not None else opts.get("jobs", os.environ.get("SURROPT_JOBS", 1))
    try:
        opts["jobs"] = int(jobs)
        opts["executions"] = int(opts["executions"])
        opts["seed"] = int(opts["seed"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    if opts["executions"] < 1 or opts["jobs"] < 1:
        raise ConfigError("executions and jobs must be positive")
    return opts


def main(argv=None) -> int:
    ns = _parser().parse_args(argv)
    if ns.list_functions:
        print("\n".join(FUNCTIONS))
        return 0
    try:
        opts = _resolve(ns)
        cells = build_matrix(opts)
        common = _common(opts)
    except ConfigError as exc:
        print(f"surropt: error: {exc}", file=sys.stderr)
        return 1

    out = Path(opts["out"])
    traces = out / "traces"
    try:
        traces.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"surropt: error: cannot create {traces}: {exc}", file=sys.stderr)
        return 1
    rows = []
    for run_id, trace_rows, row in run_matrix(cells, opts["executions"], opts["seed"], common, opts["jobs"]):
        if trace_rows:
            write_trace_csv(traces / f"{run_id}.csv", run_id, trace_rows)
        rows.append(row)
    write_summary_csv(out / "summary.csv", rows)
    print_table(cells, rows)
    failed = sum(r["status"] != "ok" for r in rows)
    if failed:
        print(f"surropt: {failed} of {len(rows)} runs failed; see the status column", file=sys.stderr)
        return 2
    return 0

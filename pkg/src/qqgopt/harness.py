"""Experiment runner: TOML configs, seeded starts, CSV traces, summaries.

Determinism contract: one seed fully determines every output byte. Start
points come from numpy's PCG64 generator (``default_rng(seed)``), traces are
written with 17-significant-digit floats, and trace timing is recorded as 0.0
unless timing mode is switched on (wall time is the one quantity that cannot
be reproduced bit-for-bit).
"""

from __future__ import annotations

import statistics
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .objectives import (
    BENCHMARK_NAMES,
    Objective,
    make_benchmark,
    make_logistic_synthetic,
)
from .optimizers import ALGORITHMS, TRANSFORMS, ConfigError, OptimizerConfig, RunResult, run
from .trace import TRACE_HEADER, TraceRecord

OBJECTIVE_NAMES = BENCHMARK_NAMES + ("logistic",)

_DEFAULT_DIMS = {
    "sphere": 10,
    "sum_powers": 5,
    "rosenbrock": 2,
    "rastrigin": 2,
    "monkey_saddle": 2,
    "himmelblau": 2,
    "six_hump_camel": 2,
    "beale": 2,
    "logistic": 9,
}

# The builtin comparison suite: every benchmark crossed with these cells.
BENCH_CELLS = (
    ("bfgs", "vanilla"),
    ("adam", "vanilla"),
    ("adam", "qqg"),
    ("adagrad", "vanilla"),
    ("adagrad", "qqg"),
    ("nag", "sqg"),
)

_CELL_OVERRIDE_KEYS = {
    "lr", "beta1", "beta2", "eps_opt", "nag_gamma", "qqg_nag_mode",
    "warmup_eta_min", "warmup_delta", "nag_eta0", "scaler_rebuild",
    "scaling_eps", "bfgs_ls", "bfgs_scale", "bfgs_verify",
}


class ConfigParseError(ValueError):
    """The experiment file is malformed or semantically invalid."""


@dataclass(frozen=True)
class Cell:
    algorithm: str
    transform: str
    overrides: dict = field(default_factory=dict)

    def label(self) -> str:
        return f"{self.algorithm}-{self.transform}"

    def optimizer_config(self, max_iters: int, grad_tol: float) -> OptimizerConfig:
        try:
            return OptimizerConfig(
                algorithm=self.algorithm,
                transform=self.transform,
                max_iters=max_iters,
                grad_tol=grad_tol,
                **self.overrides,
            )
        except (ConfigError, TypeError) as exc:
            raise ConfigParseError(f"cell {self.label()}: {exc}") from exc


@dataclass(frozen=True)
class ExperimentConfig:
    objective: str
    dimension: int
    cells: tuple
    seed: int = 0
    start_count: int = 1
    start_points: Optional[tuple] = None  # overrides sampling when given
    max_iters: int = 1000
    grad_tol: float = 1e-8
    out_dir: str = "traces"


def _reject_unknown(table: dict, allowed: set, context: str) -> None:
    unknown = set(table) - allowed
    if unknown:
        raise ConfigParseError(f"unknown key(s) in {context}: {', '.join(sorted(unknown))}")


def _parse_cell(raw: dict, index: int) -> Cell:
    context = f"cells[{index}]"
    if "algorithm" not in raw:
        raise ConfigParseError(f"{context}: missing 'algorithm'")
    _reject_unknown(raw, {"algorithm", "transform"} | _CELL_OVERRIDE_KEYS, context)
    algorithm = raw["algorithm"]
    transform = raw.get("transform", "vanilla")
    if algorithm not in ALGORITHMS:
        raise ConfigParseError(f"{context}: unknown algorithm {algorithm!r}")
    if transform not in TRANSFORMS:
        raise ConfigParseError(f"{context}: unknown transform {transform!r}")
    overrides = {k: v for k, v in raw.items() if k in _CELL_OVERRIDE_KEYS}
    return Cell(algorithm=algorithm, transform=transform, overrides=overrides)


def parse_config(path) -> ExperimentConfig:
    """Load and strictly validate a TOML experiment file.

    Unknown keys anywhere are rejected; parse errors keep tomllib's
    line/column message, semantic errors name the offending cell.
    """
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigParseError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigParseError(f"TOML parse error in {path}: {exc}") from exc

    _reject_unknown(data, {"experiment", "stopping", "starts", "cells"}, "config root")
    exp = data.get("experiment", {})
    _reject_unknown(exp, {"objective", "dimension", "seed", "out_dir"}, "[experiment]")
    objective = exp.get("objective")
    if objective not in OBJECTIVE_NAMES:
        raise ConfigParseError(
            f"[experiment].objective must be one of {', '.join(OBJECTIVE_NAMES)}, got {objective!r}"
        )
    dimension = exp.get("dimension", _DEFAULT_DIMS[objective])

    stopping = data.get("stopping", {})
    _reject_unknown(stopping, {"max_iters", "grad_tol"}, "[stopping]")

    starts = data.get("starts", {})
    _reject_unknown(starts, {"count", "points"}, "[starts]")
    if "count" in starts and "points" in starts:
        raise ConfigParseError("[starts]: give either 'count' or 'points', not both")
    start_points = None
    if "points" in starts:
        start_points = tuple(tuple(float(v) for v in p) for p in starts["points"])
        for p in start_points:
            if len(p) != dimension:
                raise ConfigParseError(
                    f"[starts].points: point of length {len(p)} does not match dimension {dimension}"
                )

    raw_cells = data.get("cells", [])
    if not raw_cells:
        raise ConfigParseError("config needs at least one [[cells]] entry")
    cells = tuple(_parse_cell(c, i) for i, c in enumerate(raw_cells))

    cfg = ExperimentConfig(
        objective=objective,
        dimension=dimension,
        cells=cells,
        seed=exp.get("seed", 0),
        start_count=starts.get("count", 1),
        start_points=start_points,
        max_iters=stopping.get("max_iters", 1000),
        grad_tol=stopping.get("grad_tol", 1e-8),
        out_dir=exp.get("out_dir", "traces"),
    )
    # materialize optimizer configs now so semantic errors surface at parse time
    for cell in cfg.cells:
        cell.optimizer_config(cfg.max_iters, cfg.grad_tol)
    return cfg


def make_objective(name: str, dimension: int, seed: int = 0) -> Objective:
    if name == "logistic":
        return make_logistic_synthetic(d=dimension - 1, seed=seed)
    return make_benchmark(name, dimension)


def sample_starts(obj: Objective, cfg: ExperimentConfig) -> list:
    if cfg.start_points is not None:
        return [np.array(p, dtype=np.float64) for p in cfg.start_points]
    rng = np.random.default_rng(cfg.seed)
    lo = obj.domain_box[:, 0]
    hi = obj.domain_box[:, 1]
    return [rng.uniform(lo, hi, size=obj.dimension) for _ in range(cfg.start_count)]


# ---------------------------------------------------------------------------
# Trace CSV I/O
# ---------------------------------------------------------------------------


def write_trace_csv(records, path) -> None:
    """Fixed seven-column schema, floats at 17 significant digits, LF endings."""
    if not records:
        raise ValueError("refusing to write an empty trace")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(TRACE_HEADER + "\n")
        for r in records:
            fh.write(
                f"{r.iter},{r.f:.17g},{r.grad_inf_norm:.17g},{r.step_norm:.17g},"
                f"{r.ls_trials},{r.updates_skipped},{r.elapsed_s:.17g}\n"
            )


def read_trace_csv(path) -> list:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != TRACE_HEADER:
            raise ValueError(f"unexpected trace header in {path}: {header!r}")
        records = []
        for line in fh:
            if not line.strip():
                continue
            c = line.rstrip("\n").split(",")
            records.append(TraceRecord(
                iter=int(c[0]), f=float(c[1]), grad_inf_norm=float(c[2]),
                step_norm=float(c[3]), ls_trials=int(c[4]),
                updates_skipped=int(c[5]), elapsed_s=float(c[6]),
            ))
    return records


# ---------------------------------------------------------------------------
# Experiment execution
# ---------------------------------------------------------------------------


@dataclass
class RunSummary:
    objective: str
    cell: str
    start_index: int
    final_f: float
    final_grad_inf_norm: float
    iterations: int
    iters_to_grad_tol: Optional[int]
    value_evals: int
    gradient_evals: int
    hessian_evals: int
    diverged: bool
    trace_file: str


def _iters_to_tol(result: RunResult, grad_tol: float) -> Optional[int]:
    for r in result.records:
        if r.grad_inf_norm <= grad_tol:
            return r.iter
    return None


def run_experiment(cfg: ExperimentConfig, out_dir=None, timing: bool = False,
                   write_summary: bool = True) -> list:
    """Execute every (cell x start) run, write one trace CSV per run plus a
    summary.csv, and return the per-run summaries. Divergence is recorded,
    never raised."""
    out = Path(out_dir if out_dir is not None else cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    obj = make_objective(cfg.objective, cfg.dimension, seed=cfg.seed)
    starts = sample_starts(obj, cfg)

    summaries = []
    for cell in cfg.cells:
        opt_cfg = cell.optimizer_config(cfg.max_iters, cfg.grad_tol)
        for i, x0 in enumerate(starts):
            result = run(obj, opt_cfg, x0, timing=timing)
            fname = f"{cfg.objective}__{cell.label()}__start{i}.csv"
            write_trace_csv(result.records, out / fname)
            summaries.append(RunSummary(
                objective=cfg.objective,
                cell=cell.label(),
                start_index=i,
                final_f=result.f,
                final_grad_inf_norm=result.grad_inf_norm,
                iterations=result.iterations,
                iters_to_grad_tol=_iters_to_tol(result, cfg.grad_tol),
                value_evals=result.eval_counts[0],
                gradient_evals=result.eval_counts[1],
                hessian_evals=result.eval_counts[2],
                diverged=result.diverged,
                trace_file=fname,
            ))
    if write_summary:
        write_summary_csv(summaries, out / "summary.csv")
    return summaries


SUMMARY_HEADER = (
    "objective,cell,starts,median_final_f,median_iterations,"
    "median_iters_to_grad_tol,median_value_evals,median_gradient_evals,"
    "median_hessian_evals,diverged_runs"
)


def write_summary_csv(summaries, path) -> None:
    """Aggregate per-run summaries to one row per (objective, cell), medians
    over starts; iters-to-tolerance is blank when no run reached it."""
    groups: dict = {}
    for s in summaries:
        groups.setdefault((s.objective, s.cell), []).append(s)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(SUMMARY_HEADER + "\n")
        for (objective, cell), rows in groups.items():
            reached = [r.iters_to_grad_tol for r in rows if r.iters_to_grad_tol is not None]
            med_tol = statistics.median(reached) if len(reached) == len(rows) else None
            fh.write(",".join([
                objective,
                cell,
                str(len(rows)),
                f"{statistics.median([r.final_f for r in rows]):.17g}",
                f"{statistics.median([r.iterations for r in rows]):g}",
                "" if med_tol is None else f"{med_tol:g}",
                f"{statistics.median([r.value_evals for r in rows]):g}",
                f"{statistics.median([r.gradient_evals for r in rows]):g}",
                f"{statistics.median([r.hessian_evals for r in rows]):g}",
                str(sum(1 for r in rows if r.diverged)),
            ]) + "\n")


def default_bench_configs(seed: int = 0, max_iters: int = 1000,
                          grad_tol: float = 1e-8, starts: int = 3) -> list:
    """One experiment per benchmark function, all crossed with BENCH_CELLS."""
    cells = tuple(Cell(algorithm=a, transform=t) for a, t in BENCH_CELLS)
    return [
        ExperimentConfig(
            objective=name,
            dimension=_DEFAULT_DIMS[name],
            cells=cells,
            seed=seed,
            start_count=starts,
            max_iters=max_iters,
            grad_tol=grad_tol,
        )
        for name in BENCHMARK_NAMES
    ]


def run_bench(out_dir, seed: int = 0, max_iters: int = 1000,
              grad_tol: float = 1e-8, starts: int = 3, timing: bool = False) -> list:
    """Run the builtin suite and write traces plus one merged summary.csv."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    all_summaries = []
    for cfg in default_bench_configs(seed=seed, max_iters=max_iters,
                                     grad_tol=grad_tol, starts=starts):
        all_summaries.extend(
            run_experiment(cfg, out_dir=out, timing=timing, write_summary=False)
        )
    write_summary_csv(all_summaries, out / "summary.csv")
    return all_summaries

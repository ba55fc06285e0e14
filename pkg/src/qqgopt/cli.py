"""Command-line entry point.

Subcommands:
  run CONFIG   execute one TOML experiment file
  bench        execute the builtin benchmark suite
  list         show known objectives, algorithms, transforms
  check        quick self-test: derivative oracles + core invariants

Exit codes: 0 success, 1 config error, 2 at least one run diverged
(outputs are still written).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .harness import (
    BENCH_CELLS,
    OBJECTIVE_NAMES,
    ConfigParseError,
    parse_config,
    run_bench,
    run_experiment,
)
from .numerics import is_spd
from .objectives import (
    finite_diff_gradient,
    finite_diff_hessian,
    make_benchmark,
    make_logistic_synthetic,
    make_quadratic,
    sample_domain_points,
)
from .optimizers import ALGORITHMS, TRANSFORMS, OptimizerConfig, run as run_optimizer


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="output directory for traces and summary")
    p.add_argument("--seed", type=int, default=None, help="override the experiment seed")
    p.add_argument("--max-iters", type=int, default=None, help="override the iteration cap")
    p.add_argument("--tol", type=float, default=None, help="override the gradient tolerance")
    p.add_argument("--timing", action="store_true",
                   help="record wall-clock time in traces (breaks byte-for-byte determinism)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qqgopt")
    parser.add_argument("--version", action="version", version=f"qqgopt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment config")
    p_run.add_argument("config", help="path to a TOML experiment file")
    _add_common(p_run)

    p_bench = sub.add_parser("bench", help="run the builtin benchmark suite")
    _add_common(p_bench)
    p_bench.add_argument("--starts", type=int, default=3, help="random starts per cell")

    sub.add_parser("list", help="list objectives, algorithms, and transforms")
    sub.add_parser("check", help="run derivative-oracle and invariant self-tests")
    return parser


def _report(summaries) -> int:
    diverged = sum(1 for s in summaries if s.diverged)
    print(f"{len(summaries)} runs, {diverged} diverged")
    return 2 if diverged else 0


def cmd_run(args) -> int:
    try:
        cfg = parse_config(args.config)
    except ConfigParseError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.max_iters is not None:
        cfg = replace(cfg, max_iters=args.max_iters)
    if args.tol is not None:
        cfg = replace(cfg, grad_tol=args.tol)
    out = args.out if args.out is not None else cfg.out_dir
    summaries = run_experiment(cfg, out_dir=out, timing=args.timing)
    return _report(summaries)


def cmd_bench(args) -> int:
    out = args.out if args.out is not None else "bench_out"
    summaries = run_bench(
        out,
        seed=args.seed if args.seed is not None else 0,
        max_iters=args.max_iters if args.max_iters is not None else 1000,
        grad_tol=args.tol if args.tol is not None else 1e-8,
        starts=args.starts,
        timing=args.timing,
    )
    return _report(summaries)


def cmd_list(_args) -> int:
    print("objectives: " + ", ".join(OBJECTIVE_NAMES))
    print("algorithms: " + ", ".join(ALGORITHMS))
    print("transforms: " + ", ".join(TRANSFORMS))
    print("bench cells: " + ", ".join(f"{a}-{t}" for a, t in BENCH_CELLS))
    return 0


def cmd_check(_args) -> int:
    """Fast self-test: derivative oracles on every objective plus the core
    BFGS invariants, printing one line per check."""
    failures = 0

    def report(name, ok, detail=""):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}{'  ' + detail if detail else ''}")
        if not ok:
            failures += 1

    objectives = [make_benchmark(n, 2 if n not in ("sphere", "sum_powers") else 4)
                  for n in OBJECTIVE_NAMES if n != "logistic"]
    objectives.append(make_logistic_synthetic(m=50, d=4, seed=1))
    for obj in objectives:
        worst_g = worst_h = 0.0
        for x in sample_domain_points(obj, 10, seed=7):
            g = obj.gradient(x)
            g_fd = finite_diff_gradient(obj, x)
            scale = max(1.0, float(np.linalg.norm(g)))
            worst_g = max(worst_g, float(np.linalg.norm(g_fd - g)) / scale)
            h = obj.hessian(x)
            h_fd = finite_diff_hessian(obj, x)
            hscale = max(1.0, float(np.linalg.norm(h)))
            worst_h = max(worst_h, float(np.linalg.norm(h_fd - h)) / hscale)
        report(f"derivatives[{obj.name}]", worst_g < 1e-5 and worst_h < 1e-4,
               f"grad={worst_g:.2e} hess={worst_h:.2e}")

    rng = np.random.default_rng(11)
    m = rng.standard_normal((5, 5))
    quad = make_quadratic(m @ m.T + 0.5 * np.eye(5))
    result = run_optimizer(
        quad,
        OptimizerConfig(algorithm="bfgs", bfgs_ls="exact", bfgs_verify=True, max_iters=20),
        rng.uniform(-2, 2, 5),
    )
    report("bfgs quadratic termination", result.converged and result.iterations <= 6,
           f"iters={result.iterations}")
    report("bfgs H stays SPD", is_spd(result.bfgs_state.h_inv))

    rosen = make_benchmark("rosenbrock", 2)
    result = run_optimizer(
        rosen,
        OptimizerConfig(algorithm="bfgs", bfgs_verify=True, max_iters=100),
        np.array([-1.2, 1.0]),
    )
    report("bfgs rosenbrock", result.f < 1e-10, f"f={result.f:.2e}")

    print(f"{failures} failure(s)")
    return 0 if failures == 0 else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "run": cmd_run,
        "bench": cmd_bench,
        "list": cmd_list,
        "check": cmd_check,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())

"""Quasi-quadratic gradient optimization: BFGS-preconditioned gradients,
diagonal quadratic-gradient scalers, enhanced first-order optimizers, and a
deterministic benchmark harness."""

__version__ = "0.1.0"

from .bfgs import BfgsState, curvature_guard, init, observe, qqg_direction, update
from .linesearch import LineSearchConfig, StepResult, backtracking, exact_quadratic, wolfe
from .numerics import is_spd, matvec, outer
from .objectives import (
    Objective,
    finite_diff_gradient,
    finite_diff_hessian,
    make_benchmark,
    make_logistic,
    make_logistic_synthetic,
    make_quadratic,
)
from .optimizers import (
    OptimizerConfig,
    RunResult,
    adagrad_step,
    adam_step,
    bfgs_optimize,
    gd_step,
    nag_step,
    run,
)
from .scaling import ScalingMatrix, apply, build_oqg, build_sqg, is_loewner_leq
from .trace import TraceRecord

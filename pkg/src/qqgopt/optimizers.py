"""The optimizer zoo: GD, NAG, AdaGrad, Adam, and a BFGS driver, each
first-order method accepting a pluggable gradient transform
(vanilla | oqg | sqg | qqg).

The qqg transform feeds every visited (x, g) pair into a BFGS inverse-Hessian
model and substitutes H_k g for the gradient; oqg/sqg substitute the
diagonally scaled gradient. Maximization is handled by negating the objective,
which makes min(f) and max(-f) produce bitwise-identical trajectories.
"""

from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import bfgs
from .linesearch import LineSearchConfig, backtracking, exact_quadratic, wolfe
from .numerics import Vector
from .objectives import Objective, counted, negated
from .scaling import ScalingMatrix, apply as apply_scaling, build_oqg, build_sqg
from .trace import TraceRecord

ALGORITHMS = ("gd", "nag", "adagrad", "adam", "bfgs")
TRANSFORMS = ("vanilla", "oqg", "sqg", "qqg")

# Paper-recommended step sizes: the enhanced AdaGrad/Adam variants run at a
# ten-fold increase over their vanilla baselines.
_DEFAULT_LR = {
    ("gd", "vanilla"): 0.01,
    ("gd", "enhanced"): 0.01,
    ("nag", "vanilla"): 0.01,
    ("nag", "enhanced"): 0.01,
    ("adagrad", "vanilla"): 0.01,
    ("adagrad", "enhanced"): 0.1,
    ("adam", "vanilla"): 0.001,
    ("adam", "enhanced"): 0.01,
}


class ConfigError(ValueError):
    """The optimizer configuration is inconsistent with the objective."""


@dataclass(frozen=True)
class OptimizerConfig:
    algorithm: str = "gd"
    transform: str = "vanilla"
    lr: Optional[float] = None  # None resolves from the defaults table
    beta1: float = 0.9
    beta2: float = 0.999
    eps_opt: float = 1e-8
    nag_gamma: Optional[float] = None  # None -> lambda recursion
    qqg_nag_mode: str = "warmup"  # warmup | linesearch
    warmup_eta_min: float = 0.01
    warmup_delta: float = 0.01
    nag_eta0: float = 0.5  # decaying eta_t = eta0/(1+t) for enhanced NAG
    scaler_rebuild: str = "dynamic"  # dynamic | fixed
    scaling_eps: float = 1e-8
    ls: LineSearchConfig = LineSearchConfig(strong=True)
    bfgs_ls: str = "strong_wolfe"  # strong_wolfe | wolfe | backtracking | exact
    bfgs_scale: float = 1.0
    bfgs_verify: bool = False
    bfgs_verify_strict: bool = True
    bfgs_track_history: bool = False
    max_iters: int = 1000
    grad_tol: float = 1e-8
    f_divergence: float = 1e12

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.transform not in TRANSFORMS:
            raise ConfigError(f"unknown transform {self.transform!r}")
        if self.lr is not None and self.lr <= 0.0:
            raise ConfigError(f"learning rate must be positive, got {self.lr}")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ConfigError("decay rates must lie in [0, 1)")
        if self.qqg_nag_mode not in ("warmup", "linesearch"):
            raise ConfigError(f"unknown qqg_nag_mode {self.qqg_nag_mode!r}")
        if self.scaler_rebuild not in ("dynamic", "fixed"):
            raise ConfigError(f"unknown scaler_rebuild {self.scaler_rebuild!r}")
        if self.bfgs_ls not in ("strong_wolfe", "wolfe", "backtracking", "exact"):
            raise ConfigError(f"unknown bfgs_ls {self.bfgs_ls!r}")

    def resolved_lr(self) -> float:
        if self.lr is not None:
            return self.lr
        kind = "vanilla" if self.transform == "vanilla" else "enhanced"
        return _DEFAULT_LR.get((self.algorithm, kind), 0.01)


# ---------------------------------------------------------------------------
# Gradient transforms
# ---------------------------------------------------------------------------


class VanillaTransform:
    mode = "vanilla"

    def effective(self, x: Vector, g: Vector) -> Vector:
        return g

    def diagnostics(self) -> dict:
        return {}


class DiagonalTransform:
    """OQG/SQG scaling; either rebuilt from the current Hessian each
    iteration or frozen to a fixed scaler."""

    def __init__(
        self,
        mode: str,
        obj: Optional[Objective] = None,
        fixed: Optional[ScalingMatrix] = None,
        eps: float = 1e-8,
    ):
        if mode not in ("oqg", "sqg"):
            raise ConfigError(f"diagonal transform mode must be oqg or sqg, got {mode!r}")
        if fixed is None and (obj is None or not obj.has_hessian):
            raise ConfigError(f"{mode} transform needs a Hessian or a fixed bound matrix")
        self.mode = mode
        self._obj = obj
        self._fixed = fixed
        self._eps = eps
        self.scaler_min = math.inf
        self.scaler_max = -math.inf

    def _build(self, x: Vector) -> ScalingMatrix:
        if self._fixed is not None:
            return self._fixed
        hbar = self._obj.hessian(x)
        if self.mode == "oqg":
            return build_oqg(hbar, self._eps)
        return build_sqg(hbar, self._eps)

    def effective(self, x: Vector, g: Vector) -> Vector:
        scaler = self._build(x)
        self.scaler_min = min(self.scaler_min, float(np.min(scaler.diag)))
        self.scaler_max = max(self.scaler_max, float(np.max(scaler.diag)))
        return apply_scaling(scaler, g)

    def diagnostics(self) -> dict:
        return {"scaler_min": self.scaler_min, "scaler_max": self.scaler_max}


class QqgTransform:
    """BFGS-backed transform: observe each iterate, emit H_k g.

    ``frozen=True`` skips all observations, pinning H at its initial value
    (used by the reduction-identity tests)."""

    mode = "qqg"

    def __init__(self, n: int, scale: float = 1.0, frozen: bool = False,
                 verify: bool = False, verify_strict: bool = True,
                 track_history: bool = False):
        self.state = bfgs.init(n, scale, verify=verify, verify_strict=verify_strict,
                               track_history=track_history)
        self.frozen = frozen
        self.descent_violations = 0

    def effective(self, x: Vector, g: Vector) -> Vector:
        if not self.frozen:
            bfgs.observe(self.state, x, g)
        direction = bfgs.qqg_direction(self.state, g)
        if np.any(g != 0.0) and float(np.dot(g, direction)) <= 0.0:
            self.descent_violations += 1
        return direction

    def diagnostics(self) -> dict:
        return {
            "updates_applied": self.state.updates_applied,
            "updates_skipped": self.state.updates_skipped,
            "descent_violations": self.descent_violations,
        }


def build_transform(cfg: OptimizerConfig, obj: Objective,
                    fixed_scaler: Optional[ScalingMatrix] = None,
                    x0: Optional[Vector] = None):
    """Construct the transform a config asks for, validating objective
    capabilities. A fixed-mode diagonal transform is built from the Hessian
    at x0 unless a prebuilt scaler is supplied."""
    if cfg.transform == "vanilla":
        return VanillaTransform()
    if cfg.transform in ("oqg", "sqg"):
        fixed = fixed_scaler
        if fixed is None and cfg.scaler_rebuild == "fixed":
            if not obj.has_hessian or x0 is None:
                raise ConfigError("fixed scaler mode needs a Hessian and a start point")
            hbar = obj.hessian(x0)
            builder = build_oqg if cfg.transform == "oqg" else build_sqg
            fixed = builder(hbar, cfg.scaling_eps)
        return DiagonalTransform(cfg.transform, obj=obj, fixed=fixed, eps=cfg.scaling_eps)
    return QqgTransform(
        obj.dimension,
        scale=cfg.bfgs_scale,
        verify=cfg.bfgs_verify,
        verify_strict=cfg.bfgs_verify_strict,
        track_history=cfg.bfgs_track_history,
    )


# ---------------------------------------------------------------------------
# Per-algorithm states and steps
# ---------------------------------------------------------------------------


@dataclass
class NagState:
    v_prev: Vector
    lam: float = 1.0  # lambda sequence seeded at 0 and advanced once at init
    t: int = 0
    last_ls_trials: int = 0


@dataclass
class AdagradState:
    acc: Vector
    t: int = 0


@dataclass
class AdamState:
    m: Vector
    v: Vector
    t: int = 0


def init_state(cfg: OptimizerConfig, x0: Vector):
    n = x0.shape[0]
    if cfg.algorithm == "gd":
        return None
    if cfg.algorithm == "nag":
        return NagState(v_prev=np.array(x0, dtype=np.float64))
    if cfg.algorithm == "adagrad":
        return AdagradState(acc=np.zeros(n))
    if cfg.algorithm == "adam":
        return AdamState(m=np.zeros(n), v=np.zeros(n))
    raise ConfigError(f"no first-order state for algorithm {cfg.algorithm!r}")


def gd_step(x: Vector, g_eff: Vector, lr: float, maximize: bool = False) -> Vector:
    if lr <= 0.0:
        raise ConfigError(f"learning rate must be positive, got {lr}")
    return x + lr * g_eff if maximize else x - lr * g_eff


def _nag_eta(state: NagState, cfg: OptimizerConfig, obj, x, g_eff, f0, g0) -> float:
    if cfg.transform == "vanilla":
        return cfg.resolved_lr()
    if cfg.transform in ("oqg", "sqg"):
        # augmented rate N_t = 1 + eta_t with decaying eta_t
        return 1.0 + cfg.nag_eta0 / (1.0 + state.t)
    if cfg.qqg_nag_mode == "warmup":
        return min(1.0, cfg.warmup_eta_min + cfg.warmup_delta * state.t)
    # line-search mode: backtrack along the negated quasi-quadratic gradient
    result = backtracking(obj, x, -g_eff, f0, g0, replace(cfg.ls, strong=False))
    state.last_ls_trials = result.trials
    if result.success:
        return result.alpha
    return max(result.alpha, 1e-8)


def nag_step(
    state: NagState,
    x: Vector,
    g_eff: Vector,
    cfg: OptimizerConfig,
    obj: Optional[Objective] = None,
    f0: Optional[float] = None,
    g0: Optional[Vector] = None,
) -> Vector:
    """Two-line accelerated recursion: a scaled gradient step to V followed by
    interpolation between consecutive V iterates."""
    eta = _nag_eta(state, cfg, obj, x, g_eff, f0, g0)
    v_new = x - eta * g_eff
    lam_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * state.lam * state.lam))
    if cfg.nag_gamma is None:
        gamma = (1.0 - state.lam) / lam_next
    else:
        gamma = cfg.nag_gamma
    x_new = (1.0 - gamma) * v_new + gamma * state.v_prev
    state.v_prev = v_new
    state.lam = lam_next
    state.t += 1
    return x_new


def adagrad_step(state: AdagradState, x: Vector, g_eff: Vector, cfg: OptimizerConfig) -> Vector:
    state.acc = state.acc + g_eff * g_eff
    state.t += 1
    return x - (cfg.resolved_lr() / (cfg.eps_opt + np.sqrt(state.acc))) * g_eff


def adam_step(state: AdamState, x: Vector, g_eff: Vector, cfg: OptimizerConfig) -> Vector:
    state.t += 1
    state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * g_eff
    state.v = cfg.beta2 * state.v + (1.0 - cfg.beta2) * g_eff * g_eff
    m_hat = state.m / (1.0 - cfg.beta1**state.t)
    v_hat = state.v / (1.0 - cfg.beta2**state.t)
    return x - cfg.resolved_lr() * m_hat / (np.sqrt(v_hat) + cfg.eps_opt)


# ---------------------------------------------------------------------------
# Run loops
# ---------------------------------------------------------------------------


@dataclass
class RunResult:
    records: list
    x: Vector
    f: float
    grad_inf_norm: float
    iterations: int
    converged: bool
    diverged: bool
    eval_counts: tuple
    diagnostics: dict
    bfgs_state: Optional[bfgs.BfgsState] = None
    iterates: Optional[list] = None


def _diverged(x: Vector, f: float, cfg: OptimizerConfig) -> bool:
    if not np.all(np.isfinite(x)) or not math.isfinite(f):
        return True
    return abs(f) > cfg.f_divergence or float(np.linalg.norm(x, np.inf)) > cfg.f_divergence


def _quiet(fn):
    """Diverging runs legitimately overflow; keep numpy from warning."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with np.errstate(over="ignore", invalid="ignore"):
            return fn(*args, **kwargs)

    return wrapper


@_quiet
def bfgs_optimize(obj: Objective, x0: Vector, cfg: OptimizerConfig,
                  timing: bool = False, collect_iterates: bool = False) -> RunResult:
    """Classic BFGS loop: p = -H g, line search, fold (s, y) into H.

    A failed line search falls back to the best step seen, floored at
    1e-8 ||x|| / ||p||, and skips the next curvature update.
    """
    counted_obj, counts = counted(obj)
    state = bfgs.init(
        x0.shape[0], cfg.bfgs_scale, verify=cfg.bfgs_verify,
        verify_strict=cfg.bfgs_verify_strict,
        track_history=cfg.bfgs_track_history,
    )
    ls_cfg_map = {
        "strong_wolfe": replace(cfg.ls, strong=True),
        "wolfe": replace(cfg.ls, strong=False),
        "backtracking": replace(cfg.ls, strong=False),
    }

    x = np.array(x0, dtype=np.float64)
    records = []
    iterates = [] if collect_iterates else None
    t0 = time.perf_counter()
    step_norm = 0.0
    ls_trials = 0
    ls_failures = 0
    wolfe_sy_min = math.inf
    wolfe_steps = 0
    skip_next_update = False
    converged = diverged = False

    f = counted_obj.value(x)
    g = counted_obj.gradient(x)
    iterations = 0
    for t in range(cfg.max_iters + 1):
        iterations = t
        gnorm = float(np.linalg.norm(g, np.inf)) if np.all(np.isfinite(g)) else math.inf
        records.append(TraceRecord(
            iter=t, f=f, grad_inf_norm=gnorm, step_norm=step_norm,
            ls_trials=ls_trials, updates_skipped=state.updates_skipped,
            elapsed_s=(time.perf_counter() - t0) if timing else 0.0,
        ))
        if iterates is not None:
            iterates.append(np.array(x))
        if _diverged(x, f, cfg):
            diverged = True
            break
        if gnorm <= cfg.grad_tol:
            converged = True
            break
        if t == cfg.max_iters:
            break

        bfgs.observe(state, x, g, apply_update=not skip_next_update)
        skip_next_update = False
        p = -bfgs.qqg_direction(state, g)

        if cfg.bfgs_ls == "exact":
            if not obj.has_hessian:
                raise ConfigError("exact line search needs an objective Hessian")
            alpha = exact_quadratic(counted_obj.hessian(x), g, p)
            x = x + alpha * p
            f = counted_obj.value(x)
            g = counted_obj.gradient(x)
            ls_trials = 0
        else:
            search = backtracking if cfg.bfgs_ls == "backtracking" else wolfe
            result = search(counted_obj, x, p, f, g, ls_cfg_map[cfg.bfgs_ls])
            ls_trials = result.trials
            if result.success:
                alpha = result.alpha
                g_old = g
                x = x + alpha * p
                f = result.f_new
                g = result.g_new
                if cfg.bfgs_ls in ("wolfe", "strong_wolfe"):
                    sy = float(np.dot(alpha * p, g - g_old))
                    wolfe_sy_min = min(wolfe_sy_min, sy)
                    wolfe_steps += 1
            else:
                ls_failures += 1
                pnorm = float(np.linalg.norm(p))
                alpha = max(result.alpha, 1e-8 * float(np.linalg.norm(x)) / pnorm)
                x = x + alpha * p
                f = counted_obj.value(x)
                g = counted_obj.gradient(x)
                skip_next_update = True
        step_norm = abs(alpha) * float(np.linalg.norm(p))

    diagnostics = {
        "updates_applied": state.updates_applied,
        "updates_skipped": state.updates_skipped,
        "ls_failures": ls_failures,
        "wolfe_sy_min": wolfe_sy_min if wolfe_steps else None,
        "wolfe_steps": wolfe_steps,
    }
    return RunResult(
        records=records, x=x, f=f,
        grad_inf_norm=float(np.linalg.norm(g, np.inf)) if np.all(np.isfinite(g)) else math.inf,
        iterations=iterations, converged=converged, diverged=diverged,
        eval_counts=counts.as_tuple(), diagnostics=diagnostics, bfgs_state=state,
        iterates=iterates,
    )


@_quiet
def run(
    obj: Objective,
    cfg: OptimizerConfig,
    x0: Vector,
    mode: str = "min",
    transform=None,
    timing: bool = False,
    collect_iterates: bool = False,
) -> RunResult:
    """Dispatch a full optimization run.

    ``mode="max"`` negates the objective and minimizes; float negation is
    exact, so the iterates match the minimization of -f bitwise. A prebuilt
    ``transform`` overrides the one the config would construct (the
    reduction-identity tests use this to freeze or pin transform state).
    """
    if mode not in ("min", "max"):
        raise ConfigError(f"mode must be 'min' or 'max', got {mode!r}")
    work = negated(obj) if mode == "max" else obj
    x0 = np.array(x0, dtype=np.float64)
    if x0.shape[0] != work.dimension:
        raise ConfigError(f"start point has size {x0.shape[0]}, objective needs {work.dimension}")

    if cfg.algorithm == "bfgs":
        if cfg.transform != "vanilla":
            raise ConfigError("the BFGS driver takes no gradient transform")
        return bfgs_optimize(work, x0, cfg, timing=timing, collect_iterates=collect_iterates)

    counted_obj, counts = counted(work)
    if transform is None:
        transform = build_transform(cfg, counted_obj, x0=x0)
    state = init_state(cfg, x0)

    x = x0
    records = []
    iterates = [] if collect_iterates else None
    t0 = time.perf_counter()
    step_norm = 0.0
    converged = diverged = False
    iterations = 0
    for t in range(cfg.max_iters + 1):
        iterations = t
        f = counted_obj.value(x)
        finite = np.all(np.isfinite(x)) and math.isfinite(f)
        g = counted_obj.gradient(x) if finite else np.full_like(x, math.nan)
        gnorm = float(np.linalg.norm(g, np.inf)) if np.all(np.isfinite(g)) else math.inf
        skipped = transform.diagnostics().get("updates_skipped", 0)
        ls_trials = state.last_ls_trials if isinstance(state, NagState) else 0
        records.append(TraceRecord(
            iter=t, f=f, grad_inf_norm=gnorm, step_norm=step_norm,
            ls_trials=ls_trials, updates_skipped=skipped,
            elapsed_s=(time.perf_counter() - t0) if timing else 0.0,
        ))
        if iterates is not None:
            iterates.append(np.array(x))
        if not finite or _diverged(x, f, cfg):
            diverged = True
            break
        if gnorm <= cfg.grad_tol:
            converged = True
            break
        if t == cfg.max_iters:
            break

        g_eff = transform.effective(x, g)
        if cfg.algorithm == "gd":
            x_new = gd_step(x, g_eff, cfg.resolved_lr())
        elif cfg.algorithm == "nag":
            x_new = nag_step(state, x, g_eff, cfg, obj=counted_obj, f0=f, g0=g)
        elif cfg.algorithm == "adagrad":
            x_new = adagrad_step(state, x, g_eff, cfg)
        else:
            x_new = adam_step(state, x, g_eff, cfg)
        step_norm = float(np.linalg.norm(x_new - x))
        x = x_new

    last = records[-1]
    diagnostics = dict(transform.diagnostics())
    return RunResult(
        records=records, x=x, f=last.f, grad_inf_norm=last.grad_inf_norm,
        iterations=iterations, converged=converged, diverged=diverged,
        eval_counts=counts.as_tuple(), diagnostics=diagnostics,
        bfgs_state=transform.state if isinstance(transform, QqgTransform) else None,
        iterates=iterates,
    )

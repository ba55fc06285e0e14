"""Step-length selection: backtracking-Armijo, (strong) Wolfe with a
bracket-then-zoom search, and the exact minimizer along a ray of a quadratic.

Failures are reported, not raised: a failed search returns the best step seen
with ``success=False`` and the caller decides the fallback. Only contract
violations (non-descent directions, bad configs) raise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .numerics import Matrix, Vector
from .objectives import Objective


class DescentDirectionError(ValueError):
    """The supplied direction is not a descent direction."""


@dataclass(frozen=True)
class LineSearchConfig:
    c1: float = 1e-4
    c2: float = 0.9
    rho: float = 0.5
    alpha0: float = 1.0
    max_trials: int = 60
    strong: bool = False

    def __post_init__(self):
        if not (0.0 < self.c1 < self.c2 < 1.0):
            raise ValueError(f"need 0 < c1 < c2 < 1, got c1={self.c1}, c2={self.c2}")
        if not (0.0 < self.rho < 1.0):
            raise ValueError(f"shrink factor must be in (0, 1), got {self.rho}")
        if self.alpha0 <= 0.0:
            raise ValueError(f"initial trial step must be positive, got {self.alpha0}")


@dataclass
class StepResult:
    alpha: float
    f_new: float
    g_new: Optional[Vector]
    trials: int
    armijo: bool
    curvature: bool
    strong_curvature: bool
    success: bool


def _flags(f0, g0p, alpha, f_new, g_new, p, c1, c2):
    """Evaluate the acceptance conditions from their definitions."""
    armijo = f_new <= f0 + c1 * alpha * g0p
    curvature = False
    strong = False
    if g_new is not None:
        slope = float(np.dot(g_new, p))
        curvature = slope >= c2 * g0p
        strong = abs(slope) <= c2 * abs(g0p)
    return armijo, curvature, strong


def backtracking(
    obj: Objective,
    x: Vector,
    p: Vector,
    f0: float,
    g0: Vector,
    cfg: LineSearchConfig = LineSearchConfig(),
) -> StepResult:
    """Shrink alpha0 by rho until the Armijo condition holds.

    Returns the first alpha = alpha0 * rho^k satisfying
    f(x + alpha p) <= f0 + c1 alpha g0.p.
    """
    g0p = float(np.dot(g0, p))
    if g0p >= 0.0:
        raise DescentDirectionError(f"g.p = {g0p} >= 0: not a descent direction")

    alpha = cfg.alpha0
    best_alpha, best_f = 0.0, f0
    for trial in range(1, cfg.max_trials + 1):
        f_new = obj.value(x + alpha * p)
        if np.isfinite(f_new) and f_new < best_f:
            best_alpha, best_f = alpha, f_new
        if np.isfinite(f_new) and f_new <= f0 + cfg.c1 * alpha * g0p:
            g_new = obj.gradient(x + alpha * p)
            armijo, curv, strong = _flags(f0, g0p, alpha, f_new, g_new, p, cfg.c1, cfg.c2)
            return StepResult(alpha, f_new, g_new, trial, armijo, curv, strong, True)
        alpha *= cfg.rho
    return StepResult(best_alpha, best_f, None, cfg.max_trials, False, False, False, False)


def wolfe(
    obj: Objective,
    x: Vector,
    p: Vector,
    f0: float,
    g0: Vector,
    cfg: LineSearchConfig = LineSearchConfig(),
) -> StepResult:
    """Bracket-then-zoom search for a step satisfying the (strong) Wolfe
    conditions. The zoom phase bisects; no polynomial interpolation."""
    g0p = float(np.dot(g0, p))
    if g0p >= 0.0:
        raise DescentDirectionError(f"g.p = {g0p} >= 0: not a descent direction")

    trials = 0
    best_alpha, best_f = 0.0, f0

    def phi(alpha):
        nonlocal trials, best_alpha, best_f
        trials += 1
        f = obj.value(x + alpha * p)
        if np.isfinite(f) and f < best_f:
            best_alpha, best_f = alpha, f
        return f

    def dphi(alpha):
        return float(np.dot(obj.gradient(x + alpha * p), p))

    def accept(alpha, f_new):
        g_new = obj.gradient(x + alpha * p)
        armijo, curv, strong = _flags(f0, g0p, alpha, f_new, g_new, p, cfg.c1, cfg.c2)
        return StepResult(alpha, f_new, g_new, trials, armijo, curv, strong, True)

    def fail():
        return StepResult(best_alpha, best_f, None, trials, False, False, False, False)

    def curvature_ok(slope):
        if cfg.strong:
            return abs(slope) <= cfg.c2 * abs(g0p)
        return slope >= cfg.c2 * g0p

    def zoom(lo, f_lo, hi):
        while trials < cfg.max_trials:
            alpha = 0.5 * (lo + hi)
            f_a = phi(alpha)
            if not np.isfinite(f_a) or f_a > f0 + cfg.c1 * alpha * g0p or f_a >= f_lo:
                hi = alpha
                continue
            slope = dphi(alpha)
            if curvature_ok(slope):
                return accept(alpha, f_a)
            if slope * (hi - lo) >= 0.0:
                hi = lo
            lo, f_lo = alpha, f_a
        return fail()

    alpha_prev, f_prev = 0.0, f0
    alpha = cfg.alpha0
    first = True
    while trials < cfg.max_trials:
        f_a = phi(alpha)
        if not np.isfinite(f_a) or f_a > f0 + cfg.c1 * alpha * g0p or (f_a >= f_prev and not first):
            return zoom(alpha_prev, f_prev, alpha)
        slope = dphi(alpha)
        if curvature_ok(slope):
            return accept(alpha, f_a)
        if slope >= 0.0:
            return zoom(alpha, f_a, alpha_prev)
        alpha_prev, f_prev = alpha, f_a
        alpha *= 2.0
        first = False
    return fail()


def exact_quadratic(a: Matrix, g0: Vector, p: Vector) -> float:
    """Exact minimizer along x + alpha p for f = x^T A x / 2 type quadratics:
    alpha* = -(g0.p) / (p.A.p). Requires positive ray curvature."""
    pap = float(p @ a @ p)
    if pap <= 0.0:
        raise ValueError(f"ray curvature p.A.p = {pap} must be positive")
    return -float(np.dot(g0, p)) / pap

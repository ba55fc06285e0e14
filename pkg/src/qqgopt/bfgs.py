"""BFGS curvature model and the quasi-quadratic gradient.

The inverse approximation H_k is maintained directly via the rank-two update
H' = (I - rho s y^T) H (I - rho y s^T) + rho s s^T with rho = 1/(y.s), which
is algebraically equivalent to the textbook update of the direct form
B' = B + y y^T/(y.s) - B s s^T B/(s.B.s). Verification mode keeps both and
cross-checks them against each other, the secant equation, and positive
definiteness after every accepted update.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .numerics import Matrix, Vector, is_spd, outer, symmetrize

CURVATURE_TAU = 1e-10
SECANT_TOL = 1e-10
INVERSE_CONSISTENCY_TOL = 1e-8


class BfgsNumericalError(RuntimeError):
    """An update produced non-finite entries; the state was rolled back."""


class BfgsVerificationError(AssertionError):
    """A verification-mode consistency check failed after an update."""


@dataclass
class BfgsState:
    """Single-owner mutable state for one optimization run."""

    h_inv: Matrix
    b_direct: Optional[Matrix] = None
    k: int = 0
    prev_x: Optional[Vector] = None
    prev_g: Optional[Vector] = None
    updates_applied: int = 0
    updates_skipped: int = 0
    verify: bool = False
    verify_strict: bool = True
    track_history: bool = False
    h_history: list = field(default_factory=list)
    verify_log: list = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return self.h_inv.shape[0]


def init(n: int, scale: float = 1.0, verify: bool = False, verify_strict: bool = True,
         track_history: bool = False) -> BfgsState:
    """Fresh state with H_0 = scale * I (and B_0 = I/scale in verify mode).

    Strict verification raises on the first failed consistency check;
    non-strict mode appends findings to ``verify_log`` and keeps going.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if scale <= 0.0:
        raise ValueError(f"initial scale must be positive, got {scale}")
    h_inv = scale * np.eye(n)
    b_direct = np.eye(n) / scale if verify else None
    return BfgsState(h_inv=h_inv, b_direct=b_direct, verify=verify,
                     verify_strict=verify_strict, track_history=track_history)


def curvature_guard(s: Vector, y: Vector, tau: float = CURVATURE_TAU) -> bool:
    """True iff s.y > tau * ||s|| * ||y||."""
    if s.shape != y.shape:
        raise ValueError(f"shape mismatch: {s.shape} vs {y.shape}")
    return float(np.dot(s, y)) > tau * float(np.linalg.norm(s)) * float(np.linalg.norm(y))


def update(state: BfgsState, s: Vector, y: Vector) -> BfgsState:
    """Apply one rank-two update for the displacement pair (s, y).

    Skipped (with the counter bumped) when the curvature guard fails; raises
    BfgsNumericalError and leaves the state untouched on non-finite results.

    The product form (I - rho s y^T) H (I - rho y s^T) + rho s s^T is applied
    in its expanded arrangement
        H - rho (s (Hy)^T + (Hy) s^T) + (rho^2 y.Hy + rho) s s^T,
    whose intermediates stay at the magnitude of the result; the factored
    arrangement squares rho ||s|| ||y|| (up to 1/tau at the guard boundary)
    and loses several digits on marginal-curvature pairs.
    """
    if not curvature_guard(s, y):
        state.updates_skipped += 1
        return state

    rho = 1.0 / float(np.dot(y, s))
    hy = state.h_inv @ y
    yhy = float(np.dot(y, hy))
    cross = outer(s, hy)
    h_new = symmetrize(
        state.h_inv - rho * (cross + cross.T) + (rho * rho * yhy + rho) * outer(s, s)
    )
    if not np.all(np.isfinite(h_new)):
        raise BfgsNumericalError("inverse update produced non-finite entries")

    b_new = None
    if state.b_direct is not None:
        b = state.b_direct
        bs = b @ s
        sbs = float(s @ bs)
        if sbs <= 0.0 or not np.isfinite(sbs):
            raise BfgsNumericalError("direct update denominator s.B.s not positive")
        b_new = symmetrize(b + rho * outer(y, y) - outer(bs, bs) / sbs)
        if not np.all(np.isfinite(b_new)):
            raise BfgsNumericalError("direct update produced non-finite entries")

    state.h_inv = h_new
    if b_new is not None:
        state.b_direct = b_new
    state.k += 1
    state.updates_applied += 1
    if state.track_history:
        state.h_history.append(h_new.copy())
    if state.verify:
        _verify(state, s, y)
    return state


def _verify(state: BfgsState, s: Vector, y: Vector) -> None:
    n = state.dimension
    findings = []
    if not is_spd(state.h_inv):
        findings.append({"k": state.k, "check": "spd", "value": None})
    secant = float(np.linalg.norm(state.h_inv @ y - s))
    secant_tol = SECANT_TOL * (1.0 + float(np.linalg.norm(s)))
    if secant > secant_tol:
        findings.append({"k": state.k, "check": "secant", "value": secant, "tol": secant_tol})
    if state.b_direct is not None:
        resid = float(np.max(np.abs(state.b_direct @ state.h_inv - np.eye(n))))
        if resid > INVERSE_CONSISTENCY_TOL * n:
            findings.append({"k": state.k, "check": "inverse_consistency",
                             "value": resid, "tol": INVERSE_CONSISTENCY_TOL * n})
    if findings and state.verify_strict:
        f = findings[0]
        raise BfgsVerificationError(
            f"{f['check']} check failed at k={f['k']}"
            + (f": {f['value']:.3e} > {f['tol']:.3e}" if f.get("value") is not None else "")
        )
    state.verify_log.extend(findings)


def qqg_direction(state: BfgsState, g: Vector) -> Vector:
    """The quasi-quadratic gradient H_k g.

    Positive definiteness of H_k makes g.(H_k g) > 0 for any g != 0, so the
    negated result is always a descent direction (and the raw result an
    ascent direction).
    """
    if g.shape[0] != state.dimension:
        raise ValueError(f"gradient size {g.shape[0]} != state dimension {state.dimension}")
    return state.h_inv @ g


def observe(state: BfgsState, x: Vector, g: Vector, apply_update: bool = True) -> BfgsState:
    """Record an iterate and, from the second call on, fold the displacement
    pair s = x - prev_x, y = g - prev_g into the model.

    ``apply_update=False`` records the point without touching H (used after a
    failed line search, where the step is a safeguard rather than a
    curvature sample).
    """
    if state.prev_x is not None and apply_update:
        s = x - state.prev_x
        y = g - state.prev_g
        update(state, s, y)
    state.prev_x = np.array(x, dtype=np.float64)
    state.prev_g = np.array(g, dtype=np.float64)
    return state

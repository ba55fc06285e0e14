"""Diagonal gradient scalers built from a Hessian (or Hessian-bound) matrix.

The original form divides by eps plus the absolute row sum of the bound
matrix; the simplified form uses only the absolute diagonal entry. Both give
strictly positive diagonals bounded above by 1/eps, so the scaled gradient
always keeps a positive inner product with the raw gradient.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .numerics import Matrix, Vector


class ScalingMode(str, Enum):
    OQG = "oqg"
    SQG = "sqg"


@dataclass(frozen=True)
class ScalingMatrix:
    diag: Vector
    epsilon: float
    mode: ScalingMode

    def __post_init__(self):
        if np.any(self.diag <= 0.0):
            raise ValueError("scaling diagonal must be strictly positive")


def _check(hbar: Matrix, eps: float) -> Matrix:
    if eps <= 0.0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    hbar = np.asarray(hbar, dtype=np.float64)
    if hbar.ndim != 2 or hbar.shape[0] != hbar.shape[1]:
        raise ValueError(f"bound matrix must be square, got shape {hbar.shape}")
    return hbar


def build_oqg(hbar: Matrix, eps: float = 1e-8) -> ScalingMatrix:
    """Entries 1 / (eps + sum_i |hbar_ji|), full absolute row sums."""
    hbar = _check(hbar, eps)
    diag = 1.0 / (eps + np.sum(np.abs(hbar), axis=1))
    return ScalingMatrix(diag=diag, epsilon=eps, mode=ScalingMode.OQG)


def build_sqg(hbar: Matrix, eps: float = 1e-8) -> ScalingMatrix:
    """Entries 1 / (eps + |hbar_jj|), diagonal only."""
    hbar = _check(hbar, eps)
    diag = 1.0 / (eps + np.abs(np.diag(hbar)))
    return ScalingMatrix(diag=diag, epsilon=eps, mode=ScalingMode.SQG)


def identity_scaling(n: int, mode: ScalingMode = ScalingMode.SQG) -> ScalingMatrix:
    """All-ones scaler; applying it reproduces the raw gradient bitwise."""
    return ScalingMatrix(diag=np.ones(n), epsilon=1e-8, mode=mode)


def apply(scaling: ScalingMatrix, g: Vector) -> Vector:
    """Element-wise product diag_j * g_j."""
    if scaling.diag.shape[0] != g.shape[0]:
        raise ValueError(
            f"scaler of size {scaling.diag.shape[0]} cannot multiply gradient of size {g.shape[0]}"
        )
    return scaling.diag * g


def is_loewner_leq(a: Matrix, b: Matrix, tol: float = 1e-10) -> bool:
    """A <= B in the Loewner ordering iff B - A is positive semi-definite.

    Test utility: checks via Cholesky of the difference shifted by a small
    multiple of the identity, so it never computes eigenvalues itself.
    """
    d = np.asarray(b, dtype=np.float64) - np.asarray(a, dtype=np.float64)
    d = 0.5 * (d + d.T)
    shift = tol * max(1.0, float(np.max(np.abs(d))))
    try:
        np.linalg.cholesky(d + shift * np.eye(d.shape[0]))
    except np.linalg.LinAlgError:
        return False
    return True

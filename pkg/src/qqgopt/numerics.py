"""Minimal dense linear algebra used throughout the library.

Vectors are 1-D float64 arrays, symmetric matrices are square 2-D float64
arrays with exact symmetry (lower triangle authoritative), and diagonal
matrices are stored as their 1-D diagonal. All values are treated as
immutable after construction.
"""

from __future__ import annotations

from typing import TypeAlias

import numpy as np
from numpy.typing import NDArray

Vector: TypeAlias = NDArray[np.float64]
Matrix: TypeAlias = NDArray[np.float64]


class DimensionMismatchError(ValueError):
    """Operands have incompatible dimensions."""


def as_vector(values, allow_nonfinite: bool = False) -> Vector:
    """Build a float64 vector, rejecting NaN/Inf unless explicitly allowed."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise ValueError(f"expected a 1-D vector with n >= 1, got shape {v.shape}")
    if not allow_nonfinite and not np.all(np.isfinite(v)):
        raise ValueError("vector contains non-finite entries")
    return v


def sym_matrix(values) -> Matrix:
    """Build a symmetric float64 matrix; the lower triangle is authoritative."""
    m = np.asarray(values, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    lower = np.tril(m)
    return lower + np.tril(m, -1).T


def symmetrize(m: Matrix) -> Matrix:
    """Return (M + M^T)/2, exactly symmetric."""
    return 0.5 * (m + m.T)


def identity(n: int) -> Matrix:
    return np.eye(n, dtype=np.float64)


def diag_matrix(entries) -> Vector:
    """Diagonal matrix, stored as its 1-D diagonal."""
    return as_vector(entries)


def matvec(m: Matrix | Vector, v: Vector) -> Vector:
    """Matrix-vector product; a 1-D ``m`` is interpreted as a diagonal."""
    if m.ndim == 1:
        if m.shape[0] != v.shape[0]:
            raise DimensionMismatchError(
                f"diagonal of size {m.shape[0]} cannot multiply vector of size {v.shape[0]}"
            )
        return m * v
    if m.shape[1] != v.shape[0]:
        raise DimensionMismatchError(
            f"matrix of shape {m.shape} cannot multiply vector of size {v.shape[0]}"
        )
    return m @ v


def outer(u: Vector, v: Vector) -> Matrix:
    """Rank-one matrix u v^T."""
    if u.shape[0] != v.shape[0]:
        raise DimensionMismatchError(
            f"outer product needs equal sizes, got {u.shape[0]} and {v.shape[0]}"
        )
    return np.outer(u, v)


def is_spd(m: Matrix) -> bool:
    """True iff a Cholesky factorization of the symmetric matrix succeeds.

    The input must be exactly symmetric; asymmetry is a contract violation,
    not a "not SPD" answer.
    """
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.array_equal(m, m.T):
        raise ValueError("is_spd requires an exactly symmetric matrix")
    if not np.all(np.isfinite(m)):
        return False
    try:
        np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        return False
    return True

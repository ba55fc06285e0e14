"""Objective functions: benchmark suite, logistic regression, and
finite-difference derivative oracles.

Every objective carries an analytic value/gradient pair and, for all the
built-in ones, an analytic Hessian. The finite-difference oracles are the
independent cross-checks used by the test suite and by ``qqgopt check``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .numerics import Matrix, Vector, symmetrize

TWO_PI = 2.0 * math.pi


class OracleError(RuntimeError):
    """A finite-difference oracle hit a non-finite function value."""


@dataclass(frozen=True)
class Objective:
    """A differentiable scalar objective with optional second derivatives.

    ``known_minima`` holds (location, value) pairs with gradient-norm below
    1e-8 at each location. ``domain_box`` is an (n, 2) array of per-coordinate
    [low, high] bounds used only to sample random start points; the optimizers
    themselves are unconstrained.
    """

    name: str
    dimension: int
    value: Callable[[Vector], float]
    gradient: Callable[[Vector], Vector]
    hessian: Optional[Callable[[Vector], Matrix]] = None
    known_minima: tuple = ()
    domain_box: Optional[Matrix] = None

    @property
    def has_hessian(self) -> bool:
        return self.hessian is not None


@dataclass
class EvalCounts:
    """Evaluation counters owned by a run loop, not by the Objective."""

    value: int = 0
    gradient: int = 0
    hessian: int = 0

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.value, self.gradient, self.hessian)


def counted(obj: Objective) -> tuple[Objective, EvalCounts]:
    """Wrap an objective so each evaluation bumps a shared counter."""
    counts = EvalCounts()

    def value(x):
        counts.value += 1
        return obj.value(x)

    def gradient(x):
        counts.gradient += 1
        return obj.gradient(x)

    wrapped_hessian = None
    if obj.hessian is not None:
        base_hessian = obj.hessian

        def wrapped_hessian(x):
            counts.hessian += 1
            return base_hessian(x)

    return replace(obj, value=value, gradient=gradient, hessian=wrapped_hessian), counts


def negated(obj: Objective) -> Objective:
    """The objective -f; float negation is exact, so min(f) and max(-f)
    produce bitwise-identical trajectories."""
    hess = None
    if obj.hessian is not None:
        base_hessian = obj.hessian
        hess = lambda x: -base_hessian(x)
    return replace(
        obj,
        name=f"neg_{obj.name}",
        value=lambda x: -obj.value(x),
        gradient=lambda x: -obj.gradient(x),
        hessian=hess,
        known_minima=(),
    )


def _box(n: int, lo: float, hi: float) -> Matrix:
    return np.tile(np.array([lo, hi], dtype=np.float64), (n, 1))


# ---------------------------------------------------------------------------
# Benchmark definitions
# ---------------------------------------------------------------------------


def _sphere(n: int) -> Objective:
    return Objective(
        name="sphere",
        dimension=n,
        value=lambda x: float(np.dot(x, x)),
        gradient=lambda x: 2.0 * x,
        hessian=lambda x: 2.0 * np.eye(n),
        known_minima=((np.zeros(n), 0.0),),
        domain_box=_box(n, -5.0, 5.0),
    )


def _sum_powers(n: int) -> Objective:
    # f = sum_i |x_i|^(i+1), i starting at 1
    exps = np.arange(1, n + 1, dtype=np.float64) + 1.0

    def value(x):
        return float(np.sum(np.abs(x) ** exps))

    def gradient(x):
        return exps * np.abs(x) ** (exps - 1.0) * np.sign(x)

    def hessian(x):
        return np.diag(exps * (exps - 1.0) * np.abs(x) ** (exps - 2.0))

    return Objective(
        name="sum_powers",
        dimension=n,
        value=value,
        gradient=gradient,
        hessian=hessian,
        known_minima=((np.zeros(n), 0.0),),
        domain_box=_box(n, -5.0, 5.0),
    )


def _rosenbrock(n: int) -> Objective:
    def value(x):
        return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))

    def gradient(x):
        g = np.zeros_like(x)
        d = x[1:] - x[:-1] ** 2
        g[:-1] += -400.0 * x[:-1] * d - 2.0 * (1.0 - x[:-1])
        g[1:] += 200.0 * d
        return g

    def hessian(x):
        h = np.zeros((n, n))
        for i in range(n - 1):
            h[i, i] += 1200.0 * x[i] ** 2 - 400.0 * x[i + 1] + 2.0
            h[i + 1, i + 1] += 200.0
            h[i, i + 1] += -400.0 * x[i]
            h[i + 1, i] += -400.0 * x[i]
        return h

    return Objective(
        name="rosenbrock",
        dimension=n,
        value=value,
        gradient=gradient,
        hessian=hessian,
        known_minima=((np.ones(n), 0.0),),
        domain_box=_box(n, -2.0, 2.0),
    )


def _rastrigin(n: int) -> Objective:
    def value(x):
        return float(10.0 * n + np.sum(x * x - 10.0 * np.cos(TWO_PI * x)))

    def gradient(x):
        return 2.0 * x + 10.0 * TWO_PI * np.sin(TWO_PI * x)

    def hessian(x):
        return np.diag(2.0 + 10.0 * TWO_PI * TWO_PI * np.cos(TWO_PI * x))

    return Objective(
        name="rastrigin",
        dimension=n,
        value=value,
        gradient=gradient,
        hessian=hessian,
        known_minima=((np.zeros(n), 0.0),),
        domain_box=_box(n, -5.12, 5.12),
    )


def _monkey_saddle() -> Objective:
    # f = x^3 - 3 x y^2; degenerate critical point at the origin (g = 0, H = 0)
    def value(p):
        x, y = p
        return float(x**3 - 3.0 * x * y * y)

    def gradient(p):
        x, y = p
        return np.array([3.0 * x * x - 3.0 * y * y, -6.0 * x * y])

    def hessian(p):
        x, y = p
        return np.array([[6.0 * x, -6.0 * y], [-6.0 * y, -6.0 * x]])

    return Objective(
        name="monkey_saddle",
        dimension=2,
        value=value,
        gradient=gradient,
        hessian=hessian,
        known_minima=(),
        domain_box=_box(2, -5.0, 5.0),
    )


# All four Himmelblau minima are exact zeros of both residual terms;
# locations below are Newton-refined to full double precision.
_HIMMELBLAU_MINIMA = (
    (3.0, 2.0),
    (-2.805118086952745, 3.131312518250573),
    (-3.779310253377747, -3.2831859912861696),
    (3.5844283403304917, -1.8481265269644034),
)


def _himmelblau() -> Objective:
    def value(p):
        x, y = p
        return float((x * x + y - 11.0) ** 2 + (x + y * y - 7.0) ** 2)

    def gradient(p):
        x, y = p
        a = x * x + y - 11.0
        b = x + y * y - 7.0
        return np.array([4.0 * x * a + 2.0 * b, 2.0 * a + 4.0 * y * b])

    def hessian(p):
        x, y = p
        return np.array(
            [
                [12.0 * x * x + 4.0 * y - 42.0, 4.0 * x + 4.0 * y],
                [4.0 * x + 4.0 * y, 12.0 * y * y + 4.0 * x - 26.0],
            ]
        )

    minima = tuple((np.array(m), 0.0) for m in _HIMMELBLAU_MINIMA)
    return Objective(
        name="himmelblau",
        dimension=2,
        value=value,
        gradient=gradient,
        hessian=hessian,
        known_minima=minima,
        domain_box=_box(2, -5.0, 5.0),
    )


_CAMEL_MIN_X = 0.08984201310031807
_CAMEL_MIN_Y = 0.7126564030207396
_CAMEL_MIN_F = -1.0316284534898774


def _six_hump_camel() -> Objective:
    # f = (4 - 2.1 x^2 + x^4/3) x^2 + x y + (-4 + 4 y^2) y^2
    def value(p):
        x, y = p
        return float(
            (4.0 - 2.1 * x * x + x**4 / 3.0) * x * x
            + x * y
            + (-4.0 + 4.0 * y * y) * y * y
        )

    def gradient(p):
        x, y = p
        return np.array(
            [8.0 * x - 8.4 * x**3 + 2.0 * x**5 + y, x - 8.0 * y + 16.0 * y**3]
        )

    def hessian(p):
        x, y = p
        return np.array(
            [[8.0 - 25.2 * x * x + 10.0 * x**4, 1.0], [1.0, -8.0 + 48.0 * y * y]]
        )

    minima = (
        (np.array([_CAMEL_MIN_X, -_CAMEL_MIN_Y]), _CAMEL_MIN_F),
        (np.array([-_CAMEL_MIN_X, _CAMEL_MIN_Y]), _CAMEL_MIN_F),
    )
    return Objective(
        name="six_hump_camel",
        dimension=2,
        value=value,
        gradient=gradient,
        hessian=hessian,
        known_minima=minima,
        domain_box=_box(2, -5.0, 5.0),
    )


def _beale() -> Objective:
    # Standard three-term Beale form; global minimum at (3, 0.5).
    def _terms(p):
        x, y = p
        return (
            1.5 - x + x * y,
            2.25 - x + x * y * y,
            2.625 - x + x * y**3,
        )

    def value(p):
        t1, t2, t3 = _terms(p)
        return float(t1 * t1 + t2 * t2 + t3 * t3)

    def gradient(p):
        x, y = p
        t1, t2, t3 = _terms(p)
        gx = 2.0 * (t1 * (y - 1.0) + t2 * (y * y - 1.0) + t3 * (y**3 - 1.0))
        gy = 2.0 * (t1 * x + t2 * 2.0 * x * y + t3 * 3.0 * x * y * y)
        return np.array([gx, gy])

    def hessian(p):
        x, y = p
        ts = _terms(p)
        dx = (y - 1.0, y * y - 1.0, y**3 - 1.0)
        dy = (x, 2.0 * x * y, 3.0 * x * y * y)
        dxy = (1.0, 2.0 * y, 3.0 * y * y)
        dyy = (0.0, 2.0 * x, 6.0 * x * y)
        hxx = sum(2.0 * dx[k] * dx[k] for k in range(3))
        hxy = sum(2.0 * (dx[k] * dy[k] + ts[k] * dxy[k]) for k in range(3))
        hyy = sum(2.0 * (dy[k] * dy[k] + ts[k] * dyy[k]) for k in range(3))
        return np.array([[hxx, hxy], [hxy, hyy]])

    return Objective(
        name="beale",
        dimension=2,
        value=value,
        gradient=gradient,
        hessian=hessian,
        known_minima=((np.array([3.0, 0.5]), 0.0),),
        domain_box=_box(2, -5.0, 5.0),
    )


_SCALABLE = {
    "sphere": _sphere,
    "sum_powers": _sum_powers,
    "rosenbrock": _rosenbrock,
    "rastrigin": _rastrigin,
}
_TWO_D = {
    "monkey_saddle": _monkey_saddle,
    "himmelblau": _himmelblau,
    "six_hump_camel": _six_hump_camel,
    "beale": _beale,
}

BENCHMARK_NAMES = tuple(_SCALABLE) + tuple(_TWO_D)


def make_benchmark(name: str, n: int = 2) -> Objective:
    """Build a benchmark objective by name.

    Scalable functions accept any n >= 1 (Rosenbrock needs n >= 2); the 2-D
    functions reject any other dimension.
    """
    if name in _SCALABLE:
        if n < 1:
            raise ValueError(f"{name} needs dimension >= 1, got {n}")
        if name == "rosenbrock" and n < 2:
            raise ValueError("rosenbrock needs dimension >= 2")
        return _SCALABLE[name](n)
    if name in _TWO_D:
        if n != 2:
            raise ValueError(f"{name} is 2-D only, got dimension {n}")
        return _TWO_D[name]()
    raise ValueError(f"unknown benchmark {name!r}; known: {', '.join(BENCHMARK_NAMES)}")


def make_quadratic(a: Matrix, name: str = "quadratic") -> Objective:
    """f(x) = x^T A x / 2 for a symmetric A; minimum at the origin when A is SPD."""
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    return Objective(
        name=name,
        dimension=n,
        value=lambda x: 0.5 * float(x @ a @ x),
        gradient=lambda x: a @ x,
        hessian=lambda x: a,
        known_minima=((np.zeros(n), 0.0),),
        domain_box=_box(n, -5.0, 5.0),
    )


# ---------------------------------------------------------------------------
# Logistic regression
# ---------------------------------------------------------------------------


def make_logistic(features: Matrix, labels: Vector) -> Objective:
    """Negative log-likelihood of logistic regression with +/-1 labels.

    ``features`` must already include an intercept column. The stable
    formulation log(1 + exp(-z)) = logaddexp(0, -z) is used throughout.
    """
    x_mat = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if x_mat.ndim != 2 or x_mat.shape[0] == 0:
        raise ValueError("feature matrix must be non-empty and 2-D")
    if y.shape != (x_mat.shape[0],):
        raise ValueError("labels must be one per sample")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be -1 or +1")
    d = x_mat.shape[1]

    def value(w):
        z = y * (x_mat @ w)
        return float(np.sum(np.logaddexp(0.0, -z)))

    def gradient(w):
        z = y * (x_mat @ w)
        s = 1.0 / (1.0 + np.exp(-z))  # sigma(z)
        return -(x_mat.T @ ((1.0 - s) * y))

    def hessian(w):
        z = y * (x_mat @ w)
        s = 1.0 / (1.0 + np.exp(-z))
        return symmetrize((x_mat * (s * (1.0 - s))[:, None]).T @ x_mat)

    return Objective(
        name="logistic",
        dimension=d,
        value=value,
        gradient=gradient,
        hessian=hessian,
        known_minima=(),
        domain_box=_box(d, -1.0, 1.0),
    )


def synth_logistic_data(
    m: int = 200, d: int = 8, seed: int = 0
) -> tuple[Matrix, Vector, Vector]:
    """Seeded synthetic dataset: Gaussian features with an intercept column
    first, labels sampled from the logistic model under one drawn weight
    vector. Returns (features, labels, true_weights)."""
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((m, d))
    x_mat = np.hstack([np.ones((m, 1)), raw])
    w_true = rng.standard_normal(d + 1)
    p = 1.0 / (1.0 + np.exp(-(x_mat @ w_true)))
    y = np.where(rng.random(m) < p, 1.0, -1.0)
    return x_mat, y, w_true


def make_logistic_synthetic(m: int = 200, d: int = 8, seed: int = 0) -> Objective:
    x_mat, y, _ = synth_logistic_data(m=m, d=d, seed=seed)
    return make_logistic(x_mat, y)


def write_logistic_csv(path, features: Matrix, labels: Vector) -> None:
    """Persist a dataset as CSV: header row, one feature column per input
    dimension, label column last, 17-significant-digit floats."""
    x_mat = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    header = ",".join([f"x{j}" for j in range(x_mat.shape[1])] + ["label"])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(header + "\n")
        for row, lab in zip(x_mat, y):
            cells = [f"{v:.17g}" for v in row] + [f"{int(lab):d}"]
            fh.write(",".join(cells) + "\n")


def read_logistic_csv(path) -> tuple[Matrix, Vector]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(",")
        if header[-1] != "label":
            raise ValueError("expected 'label' as the last CSV column")
        rows = [line.rstrip("\n").split(",") for line in fh if line.strip()]
    data = np.array([[float(c) for c in r] for r in rows])
    return data[:, :-1], data[:, -1]


# ---------------------------------------------------------------------------
# Finite-difference oracles
# ---------------------------------------------------------------------------


def _steps(x: Vector, h: float) -> Vector:
    return h * np.maximum(1.0, np.abs(x))


def finite_diff_gradient(obj: Objective, x: Vector, h: float = 1e-6) -> Vector:
    """Central-difference gradient, per-coordinate step h * max(1, |x_i|)."""
    if h <= 0:
        raise ValueError("step must be positive")
    x = np.asarray(x, dtype=np.float64)
    steps = _steps(x, h)
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = steps[i]
        fp = obj.value(x + e)
        fm = obj.value(x - e)
        if not (math.isfinite(fp) and math.isfinite(fm)):
            raise OracleError(f"non-finite value near coordinate {i}")
        g[i] = (fp - fm) / (2.0 * steps[i])
    return g


def finite_diff_hessian(obj: Objective, x: Vector, h: float = 1e-6) -> Matrix:
    """Central differences of the analytic gradient, symmetrized."""
    if h <= 0:
        raise ValueError("step must be positive")
    x = np.asarray(x, dtype=np.float64)
    steps = _steps(x, h)
    n = x.size
    cols = np.zeros((n, n))
    for i in range(n):
        e = np.zeros_like(x)
        e[i] = steps[i]
        gp = obj.gradient(x + e)
        gm = obj.gradient(x - e)
        if not (np.all(np.isfinite(gp)) and np.all(np.isfinite(gm))):
            raise OracleError(f"non-finite gradient near coordinate {i}")
        cols[:, i] = (gp - gm) / (2.0 * steps[i])
    return symmetrize(cols)


def sample_domain_points(obj: Objective, count: int, seed: int) -> Matrix:
    """Uniform draws from the objective's domain box (PCG64-seeded)."""
    if obj.domain_box is None:
        raise ValueError(f"objective {obj.name} has no domain box")
    rng = np.random.default_rng(seed)
    lo = obj.domain_box[:, 0]
    hi = obj.domain_box[:, 1]
    return rng.uniform(lo, hi, size=(count, obj.dimension))

import numpy as np
import pytest

from qqgopt.bfgs import (
    BfgsNumericalError,
    curvature_guard,
    init,
    observe,
    qqg_direction,
    update,
)
from qqgopt.numerics import is_spd
from qqgopt.objectives import make_benchmark, make_quadratic, negated
from qqgopt.optimizers import OptimizerConfig, run


class TestInit:
    def test_identity_default(self):
        st = init(3)
        np.testing.assert_array_equal(st.h_inv, np.eye(3))
        assert st.k == 0

    def test_scaled(self):
        st = init(2, 0.5)
        np.testing.assert_array_equal(st.h_inv, 0.5 * np.eye(2))

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            init(2, -1.0)
        with pytest.raises(ValueError):
            init(0)

    def test_verify_mode_keeps_direct_form(self):
        st = init(2, 0.5, verify=True)
        np.testing.assert_array_equal(st.b_direct, 2.0 * np.eye(2))


class TestCurvatureGuard:
    def test_aligned(self):
        assert curvature_guard(np.array([1.0, 0.0]), np.array([1.0, 0.0]))

    def test_opposed(self):
        assert not curvature_guard(np.array([1.0, 0.0]), np.array([-1.0, 0.0]))

    def test_orthogonal_fails_threshold(self):
        assert not curvature_guard(np.array([1.0, 0.0]), np.array([0.0, 1.0]))

    def test_zero_displacement(self):
        assert not curvature_guard(np.zeros(2), np.array([1.0, 0.0]))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            curvature_guard(np.zeros(2), np.zeros(3))


class TestUpdate:
    def test_fixed_point_when_y_equals_s(self):
        st = init(2)
        update(st, np.array([1.0, 0.0]), np.array([1.0, 0.0]))
        np.testing.assert_allclose(st.h_inv, np.eye(2), atol=1e-15)
        assert st.k == 1 and st.updates_applied == 1

    def test_scaling_pair(self):
        st = init(2)
        s, y = np.array([1.0, 0.0]), np.array([2.0, 0.0])
        update(st, s, y)
        np.testing.assert_allclose(st.h_inv, np.diag([0.5, 1.0]), atol=1e-15)
        np.testing.assert_allclose(st.h_inv @ y, s, atol=1e-15)

    def test_guard_failure_skips(self):
        st = init(2)
        update(st, np.array([1.0, 0.0]), np.array([-1.0, 0.0]))
        np.testing.assert_array_equal(st.h_inv, np.eye(2))
        assert st.k == 0 and st.updates_skipped == 1

    def test_secant_and_spd_on_random_pairs(self):
        rng = np.random.default_rng(7)
        st = init(5, verify=True)
        applied = 0
        while applied < 50:
            s = rng.standard_normal(5)
            y = s * rng.uniform(0.5, 3.0, size=5) + 0.1 * rng.standard_normal(5)
            if not curvature_guard(s, y):
                continue
            update(st, s, y)
            applied += 1
            assert is_spd(st.h_inv)
            assert np.linalg.norm(st.h_inv @ y - s) <= 1e-10 * (1.0 + np.linalg.norm(s))
            # direct and inverse recursions stay mutual inverses
            resid = np.max(np.abs(st.b_direct @ st.h_inv - np.eye(5)))
            assert resid <= 1e-8 * 5

    def test_nonfinite_rolls_back(self):
        # H is near the float ceiling, so H y overflows inside the update
        st = init(2, scale=1e308)
        h_before = st.h_inv.copy()
        with pytest.raises(BfgsNumericalError), np.errstate(over="ignore", invalid="ignore"):
            update(st, np.array([1.0, 2.0]), np.array([1.0, 2.0]))
        np.testing.assert_array_equal(st.h_inv, h_before)
        assert st.k == 0


class TestQqgDirection:
    def test_identity_reduces_to_gradient(self):
        st = init(2)
        g = np.array([3.0, 4.0])
        np.testing.assert_array_equal(qqg_direction(st, g), g)

    def test_scaled_state(self):
        st = init(2)
        update(st, np.array([1.0, 0.0]), np.array([2.0, 0.0]))
        np.testing.assert_allclose(qqg_direction(st, np.array([2.0, 2.0])), [1.0, 2.0], atol=1e-15)

    def test_zero_gradient(self):
        st = init(3)
        np.testing.assert_array_equal(qqg_direction(st, np.zeros(3)), np.zeros(3))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            qqg_direction(init(2), np.zeros(3))

    def test_positive_alignment_with_gradient(self):
        rng = np.random.default_rng(8)
        st = init(4)
        for _ in range(30):
            s = rng.standard_normal(4)
            y = s + 0.2 * rng.standard_normal(4)
            if curvature_guard(s, y):
                update(st, s, y)
            g = rng.standard_normal(4)
            if np.linalg.norm(g) > 0:
                assert float(np.dot(g, qqg_direction(st, g))) > 0.0


class TestObserve:
    def test_first_call_records_only(self):
        st = init(2)
        observe(st, np.zeros(2), np.array([1.0, 1.0]))
        assert st.k == 0 and st.updates_applied == 0
        np.testing.assert_array_equal(st.prev_x, np.zeros(2))

    def test_identical_points_skip(self):
        st = init(2)
        x, g = np.zeros(2), np.array([1.0, 1.0])
        observe(st, x, g)
        observe(st, x, g)
        assert st.updates_skipped == 1 and st.updates_applied == 0

    def test_sphere_pair_yields_newton_direction(self):
        # On f = |x|^2 the displacement (1,0) gives y = (2,0), H = diag(1/2, 1),
        # and the transformed gradient at x1 equals the exact Newton step.
        sphere = make_benchmark("sphere", 2)
        st = init(2)
        x0, x1 = np.zeros(2), np.array([1.0, 0.0])
        observe(st, x0, sphere.gradient(x0))
        observe(st, x1, sphere.gradient(x1))
        np.testing.assert_allclose(st.h_inv, np.diag([0.5, 1.0]), atol=1e-15)
        np.testing.assert_allclose(qqg_direction(st, sphere.gradient(x1)), [1.0, 0.0], atol=1e-15)

    def test_record_only_mode(self):
        st = init(2)
        observe(st, np.zeros(2), np.array([1.0, 0.0]))
        observe(st, np.ones(2), np.array([2.0, 1.0]), apply_update=False)
        assert st.updates_applied == 0
        np.testing.assert_array_equal(st.prev_x, np.ones(2))


class TestDriverInvariants:
    def test_finite_termination_on_quadratics(self):
        for n in (2, 5):
            for seed in range(5):
                rng = np.random.default_rng(seed)
                m = rng.standard_normal((n, n))
                a = m @ m.T + 0.5 * np.eye(n)
                quad = make_quadratic(a)
                res = run(quad, OptimizerConfig(algorithm="bfgs", bfgs_ls="exact",
                                                max_iters=n + 1, grad_tol=1e-10),
                          rng.uniform(-2, 2, n))
                assert res.converged and res.iterations <= n + 1
                assert np.linalg.norm(a @ res.x) <= 1e-8

    def test_min_max_produce_identical_h_sequences(self):
        obj = make_benchmark("rosenbrock", 2)
        cfg = OptimizerConfig(algorithm="bfgs", max_iters=40, bfgs_track_history=True)
        x0 = np.array([-1.2, 1.0])
        res_min = run(obj, cfg, x0, mode="min")
        res_max = run(negated(obj), cfg, x0, mode="max")
        assert len(res_min.bfgs_state.h_history) == len(res_max.bfgs_state.h_history)
        assert len(res_min.bfgs_state.h_history) > 0
        for h1, h2 in zip(res_min.bfgs_state.h_history, res_max.bfgs_state.h_history):
            np.testing.assert_array_equal(h1, h2)

    def test_spd_after_every_update_on_benchmarks(self):
        for name in ("sphere", "rosenbrock", "himmelblau"):
            obj = make_benchmark(name, 2)
            cfg = OptimizerConfig(algorithm="bfgs", max_iters=60,
                                  bfgs_verify=True, bfgs_track_history=True)
            res = run(obj, cfg, np.array([-1.0, 1.5]))
            for h in res.bfgs_state.h_history:
                assert is_spd(h)

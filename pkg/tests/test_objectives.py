import math

import numpy as np
import pytest

from qqgopt.numerics import is_spd
from qqgopt.objectives import (
    BENCHMARK_NAMES,
    Objective,
    OracleError,
    counted,
    finite_diff_gradient,
    finite_diff_hessian,
    make_benchmark,
    make_logistic,
    make_quadratic,
    negated,
    read_logistic_csv,
    sample_domain_points,
    synth_logistic_data,
    write_logistic_csv,
)


class TestBenchmarkValues:
    def test_sphere(self):
        obj = make_benchmark("sphere", 2)
        x = np.array([1.0, 1.0])
        assert obj.value(x) == 2.0
        np.testing.assert_array_equal(obj.gradient(x), [2.0, 2.0])

    def test_rosenbrock_minimum(self):
        obj = make_benchmark("rosenbrock", 2)
        x = np.ones(2)
        assert obj.value(x) == 0.0
        np.testing.assert_array_equal(obj.gradient(x), [0.0, 0.0])

    def test_rosenbrock_origin(self):
        assert make_benchmark("rosenbrock", 2).value(np.zeros(2)) == 1.0

    def test_rastrigin_origin(self):
        assert make_benchmark("rastrigin", 2).value(np.zeros(2)) == 0.0

    def test_monkey_saddle_near_origin(self):
        obj = make_benchmark("monkey_saddle", 2)
        x = np.array([1e-3, 0.0])
        np.testing.assert_allclose(obj.gradient(x), [3e-6, 0.0], atol=1e-20)
        np.testing.assert_allclose(obj.hessian(x), [[6e-3, 0.0], [0.0, -6e-3]], atol=1e-20)

    def test_himmelblau(self):
        obj = make_benchmark("himmelblau", 2)
        assert obj.value(np.array([3.0, 2.0])) == 0.0
        assert obj.value(np.zeros(2)) == 170.0

    def test_six_hump_camel_origin(self):
        obj = make_benchmark("six_hump_camel", 2)
        assert obj.value(np.zeros(2)) == 0.0
        np.testing.assert_array_equal(obj.gradient(np.zeros(2)), [0.0, 0.0])

    def test_beale_minimum(self):
        assert make_benchmark("beale", 2).value(np.array([3.0, 0.5])) == 0.0

    def test_sum_powers_uses_shifted_exponents(self):
        # f = |x1|^2 + |x2|^3 + |x3|^4
        obj = make_benchmark("sum_powers", 3)
        assert obj.value(np.array([2.0, 2.0, 2.0])) == 4.0 + 8.0 + 16.0

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            make_benchmark("mystery", 2)

    def test_dimension_validation(self):
        with pytest.raises(ValueError):
            make_benchmark("himmelblau", 3)
        with pytest.raises(ValueError):
            make_benchmark("rosenbrock", 1)
        with pytest.raises(ValueError):
            make_benchmark("sphere", 0)


class TestKnownMinima:
    @pytest.mark.parametrize("name", BENCHMARK_NAMES)
    def test_gradient_vanishes(self, name):
        obj = make_benchmark(name, 4 if name in ("sphere", "sum_powers", "rosenbrock", "rastrigin") else 2)
        if name == "rosenbrock":
            obj = make_benchmark(name, 4)
        for loc, val in obj.known_minima:
            assert float(np.max(np.abs(obj.gradient(loc)))) <= 1e-8
            assert abs(obj.value(loc) - val) <= 1e-12 * max(1.0, abs(val))

    @pytest.mark.parametrize(
        "name", ["sphere", "rosenbrock", "himmelblau", "beale", "six_hump_camel"]
    )
    def test_strict_minima_have_spd_hessian(self, name):
        obj = make_benchmark(name, 4 if name in ("sphere", "rosenbrock") else 2)
        for loc, _ in obj.known_minima:
            assert is_spd(0.5 * (obj.hessian(loc) + obj.hessian(loc).T))

    def test_monkey_saddle_origin_is_fully_degenerate(self):
        obj = make_benchmark("monkey_saddle", 2)
        np.testing.assert_array_equal(obj.gradient(np.zeros(2)), [0.0, 0.0])
        np.testing.assert_array_equal(obj.hessian(np.zeros(2)), np.zeros((2, 2)))


class TestLogistic:
    def test_zero_weights_value(self):
        x_mat, y, _ = synth_logistic_data(m=64, d=3, seed=5)
        obj = make_logistic(x_mat, y)
        assert math.isclose(obj.value(np.zeros(4)), 64 * math.log(2.0), rel_tol=1e-14)

    def test_single_sample_gradient(self):
        obj = make_logistic(np.array([[1.0]]), np.array([1.0]))
        np.testing.assert_allclose(obj.gradient(np.zeros(1)), [-0.5], atol=1e-15)

    def test_hessian_at_zero_is_quarter_gram(self):
        x_mat, y, _ = synth_logistic_data(m=40, d=3, seed=6)
        obj = make_logistic(x_mat, y)
        np.testing.assert_allclose(obj.hessian(np.zeros(4)), 0.25 * x_mat.T @ x_mat, rtol=1e-12)

    def test_rejects_bad_labels(self):
        with pytest.raises(ValueError):
            make_logistic(np.ones((2, 1)), np.array([1.0, 0.0]))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            make_logistic(np.zeros((0, 2)), np.zeros(0))

    def test_csv_round_trip(self, tmp_path):
        x_mat, y, _ = synth_logistic_data(m=17, d=2, seed=9)
        path = tmp_path / "data.csv"
        write_logistic_csv(path, x_mat, y)
        x2, y2 = read_logistic_csv(path)
        np.testing.assert_array_equal(x_mat, x2)
        np.testing.assert_array_equal(y, y2)
        header = path.read_text().splitlines()[0]
        assert header.split(",")[-1] == "label"

    def test_generator_is_seeded(self):
        a = synth_logistic_data(m=10, d=2, seed=3)
        b = synth_logistic_data(m=10, d=2, seed=3)
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])


class TestFiniteDifferences:
    def test_sphere_gradient(self):
        obj = make_benchmark("sphere", 2)
        g = finite_diff_gradient(obj, np.array([1.0, 0.0]))
        np.testing.assert_allclose(g, [2.0, 0.0], atol=1e-8)

    def test_constant_objective(self):
        obj = Objective(name="const", dimension=2, value=lambda x: 7.0,
                        gradient=lambda x: np.zeros(2))
        np.testing.assert_allclose(finite_diff_gradient(obj, np.ones(2)), np.zeros(2), atol=1e-9)

    def test_rosenbrock_gradient_matches(self):
        obj = make_benchmark("rosenbrock", 2)
        x = np.array([-1.2, 1.0])
        g = obj.gradient(x)
        g_fd = finite_diff_gradient(obj, x)
        assert np.linalg.norm(g_fd - g) / np.linalg.norm(g) < 1e-5

    def test_sphere_hessian(self):
        obj = make_benchmark("sphere", 3)
        np.testing.assert_allclose(finite_diff_hessian(obj, np.ones(3)), 2.0 * np.eye(3), atol=1e-6)

    def test_monkey_saddle_hessian(self):
        obj = make_benchmark("monkey_saddle", 2)
        h = finite_diff_hessian(obj, np.array([1.0, 1.0]))
        np.testing.assert_allclose(h, [[6.0, -6.0], [-6.0, -6.0]], atol=1e-4)

    def test_logistic_hessian_at_zero(self):
        x_mat, y, _ = synth_logistic_data(m=30, d=3, seed=8)
        obj = make_logistic(x_mat, y)
        h_fd = finite_diff_hessian(obj, np.zeros(4))
        np.testing.assert_allclose(h_fd, 0.25 * x_mat.T @ x_mat, atol=1e-4)

    def test_invalid_step(self):
        obj = make_benchmark("sphere", 2)
        with pytest.raises(ValueError):
            finite_diff_gradient(obj, np.zeros(2), h=0.0)

    def test_nonfinite_raises_oracle_error(self):
        obj = Objective(name="bad", dimension=1, value=lambda x: math.inf,
                        gradient=lambda x: np.zeros(1))
        with pytest.raises(OracleError):
            finite_diff_gradient(obj, np.zeros(1))

    @pytest.mark.parametrize("name", BENCHMARK_NAMES)
    def test_derivatives_on_random_points(self, name):
        n = 4 if name in ("sphere", "sum_powers", "rosenbrock", "rastrigin") else 2
        obj = make_benchmark(name, n)
        for x in sample_domain_points(obj, 20, seed=13):
            g = obj.gradient(x)
            g_fd = finite_diff_gradient(obj, x)
            assert np.linalg.norm(g_fd - g) <= 1e-5 * max(1.0, np.linalg.norm(g))
            h = obj.hessian(x)
            h_fd = finite_diff_hessian(obj, x)
            assert np.linalg.norm(h_fd - h) <= 1e-4 * max(1.0, np.linalg.norm(h))


class TestWrappers:
    def test_counted_tracks_evaluations(self):
        obj, counts = counted(make_benchmark("sphere", 2))
        obj.value(np.zeros(2))
        obj.value(np.zeros(2))
        obj.gradient(np.zeros(2))
        obj.hessian(np.zeros(2))
        assert counts.as_tuple() == (2, 1, 1)

    def test_negated_is_exact(self):
        obj = make_benchmark("rosenbrock", 2)
        neg = negated(obj)
        x = np.array([0.3, -0.7])
        assert neg.value(x) == -obj.value(x)
        np.testing.assert_array_equal(neg.gradient(x), -obj.gradient(x))
        np.testing.assert_array_equal(neg.hessian(x), -obj.hessian(x))

    def test_quadratic_helper(self):
        a = np.array([[2.0, 0.0], [0.0, 4.0]])
        quad = make_quadratic(a)
        assert quad.value(np.array([1.0, 1.0])) == 3.0
        np.testing.assert_array_equal(quad.gradient(np.array([1.0, 1.0])), [2.0, 4.0])
        np.testing.assert_array_equal(quad.hessian(np.zeros(2)), a)

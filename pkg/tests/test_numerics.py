import numpy as np
import pytest

from qqgopt.numerics import (
    DimensionMismatchError,
    as_vector,
    diag_matrix,
    identity,
    is_spd,
    matvec,
    outer,
    sym_matrix,
    symmetrize,
)


class TestMatvec:
    def test_identity_case(self):
        v = as_vector([3.0, 4.0])
        np.testing.assert_array_equal(matvec(identity(2), v), v)

    def test_diagonal(self):
        np.testing.assert_array_equal(
            matvec(diag_matrix([2.0, 3.0]), as_vector([1.0, 1.0])), [2.0, 3.0]
        )

    def test_full_symmetric(self):
        m = sym_matrix([[2.0, 1.0], [1.0, 3.0]])
        np.testing.assert_array_equal(matvec(m, as_vector([1.0, 0.0])), [2.0, 1.0])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            matvec(identity(3), as_vector([1.0, 2.0]))
        with pytest.raises(DimensionMismatchError):
            matvec(diag_matrix([1.0, 2.0]), as_vector([1.0, 2.0, 3.0]))

    def test_identity_is_identity_map(self):
        rng = np.random.default_rng(0)
        for n in (1, 2, 5, 17):
            eye = identity(n)
            for _ in range(25):
                v = rng.standard_normal(n)
                np.testing.assert_array_equal(matvec(eye, v), v)


class TestIsSpd:
    def test_identity(self):
        assert is_spd(identity(3))

    def test_negative_eigenvalue(self):
        assert not is_spd(sym_matrix([[1.0, 0.0], [0.0, -1.0]]))

    def test_two_by_two(self):
        # eigenvalues (5 +- sqrt(5)) / 2, both positive
        assert is_spd(sym_matrix([[2.0, 1.0], [1.0, 3.0]]))

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            is_spd(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_spd_implies_positive_quadratic_form(self):
        rng = np.random.default_rng(1)
        m = rng.standard_normal((4, 4))
        spd = symmetrize(m @ m.T + 0.1 * np.eye(4))
        assert is_spd(spd)
        for _ in range(100):
            v = rng.standard_normal(4)
            while np.linalg.norm(v) == 0.0:
                v = rng.standard_normal(4)
            assert float(v @ spd @ v) > 0.0

    def test_nonfinite_is_not_spd(self):
        m = np.full((2, 2), np.inf)
        assert not is_spd(symmetrize(m))


class TestOuter:
    def test_unit_vectors(self):
        np.testing.assert_array_equal(
            outer(as_vector([1.0, 0.0]), as_vector([1.0, 0.0])), [[1.0, 0.0], [0.0, 0.0]]
        )

    def test_zero_vector(self):
        z = np.zeros(3)
        np.testing.assert_array_equal(outer(z, as_vector([1.0, 2.0, 3.0])), np.zeros((3, 3)))

    def test_rank_one(self):
        np.testing.assert_array_equal(
            outer(as_vector([1.0, 2.0]), as_vector([1.0, 2.0])), [[1.0, 2.0], [2.0, 4.0]]
        )

    def test_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            outer(as_vector([1.0]), as_vector([1.0, 2.0]))

    def test_self_outer_symmetric_psd(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            u = rng.standard_normal(3)
            m = outer(u, u)
            np.testing.assert_array_equal(m, m.T)
            # PSD: v.M.v = (u.v)^2 >= 0
            v = rng.standard_normal(3)
            assert float(v @ m @ v) >= 0.0


class TestConstructors:
    def test_vector_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            as_vector([1.0, np.nan])
        as_vector([1.0, np.nan], allow_nonfinite=True)

    def test_vector_rejects_empty_and_2d(self):
        with pytest.raises(ValueError):
            as_vector([])
        with pytest.raises(ValueError):
            as_vector([[1.0, 2.0]])

    def test_sym_matrix_mirrors_lower_triangle(self):
        m = sym_matrix([[1.0, 99.0], [2.0, 3.0]])
        np.testing.assert_array_equal(m, [[1.0, 2.0], [2.0, 3.0]])
        assert np.array_equal(m, m.T)

    def test_sym_matrix_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            sym_matrix([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])

# filename: test_dense.py
# @Time    : 2025/11/23 09:20
# @Software: PyCharm
import numpy as np
import pytest
import scipy.linalg
from scipy import sparse

from relaxuni.exceptions import ArgumentError, DimensionError
from relaxuni.linalg import (
    SparseSym,
    as_dense,
    gershgorin_bound,
    is_unitary,
    mat_exp_reference,
    mat_exp_taylor,
    scalar_kind,
    skew_from_free,
    unitary_from_free,
)
from relaxuni.schema import ScalarKind


class TestAsDense:
    def test_real_input_becomes_float64(self) -> None:
        m = as_dense([[1, 2], [3, 4]])
        assert m.dtype == np.float64
        assert scalar_kind(m) is ScalarKind.REAL64

    def test_complex_input_becomes_complex128(self) -> None:
        m = as_dense(np.array([[1 + 1j]], dtype=np.complex64))
        assert m.dtype == np.complex128
        assert scalar_kind(m) is ScalarKind.COMPLEX128

    def test_vector_rejected(self) -> None:
        with pytest.raises(DimensionError) as exc:
            as_dense(np.ones(3), name="x")
        assert exc.value.exit_code == 11
        assert "x must be 2-D" in exc.value.message


class TestMatrixExponential:
    @pytest.mark.parametrize("scale", [0.1, 1.0, 5.0])
    def test_reference_matches_scipy(self, rng: np.random.Generator, scale: float) -> None:
        m = scale * rng.normal(size=(6, 6))
        exact = scipy.linalg.expm(m)
        assert np.linalg.norm(mat_exp_reference(m) - exact) <= 1e-9 * np.linalg.norm(exact)

    def test_taylor_order_zero_is_identity(self, rng: np.random.Generator) -> None:
        np.testing.assert_array_equal(mat_exp_taylor(rng.normal(size=(4, 4)), 0), np.eye(4))

    def test_taylor_order_one(self, rng: np.random.Generator) -> None:
        m = rng.normal(size=(4, 4))
        np.testing.assert_allclose(mat_exp_taylor(m, 1), np.eye(4) + m)

    def test_taylor_error_shrinks_with_order(self, rng: np.random.Generator) -> None:
        m = 0.3 * rng.normal(size=(5, 5))
        exact = scipy.linalg.expm(m)
        errs = [np.linalg.norm(mat_exp_taylor(m, t) - exact) for t in (1, 3, 6, 20)]
        assert errs == sorted(errs, reverse=True)
        assert errs[-1] < 1e-12

    def test_negative_order_rejected(self) -> None:
        with pytest.raises(ArgumentError):
            mat_exp_taylor(np.eye(2), -1)

    def test_non_square_rejected(self) -> None:
        with pytest.raises(DimensionError):
            mat_exp_reference(np.ones((2, 3)))


class TestUnitary:
    def test_skew_is_exact(self, random_complex) -> None:
        w = skew_from_free(random_complex(5, 5))
        np.testing.assert_array_equal(w + w.conj().T, np.zeros((5, 5)))

    def test_complex_free_gives_unitary(self, random_complex) -> None:
        u = unitary_from_free(random_complex(6, 6))
        assert is_unitary(u)

    def test_real_free_gives_orthogonal(self, rng: np.random.Generator) -> None:
        u = unitary_from_free(rng.normal(size=(6, 6)))
        assert u.dtype == np.float64
        np.testing.assert_allclose(u.T @ u, np.eye(6), atol=1e-10)

    def test_non_unitary_detected(self) -> None:
        assert not is_unitary(2.0 * np.eye(3))


class TestGershgorin:
    def test_dense_and_sparse_agree(self, rng: np.random.Generator) -> None:
        m = rng.normal(size=(7, 7))
        assert gershgorin_bound(m) == pytest.approx(gershgorin_bound(sparse.csr_matrix(m)))

    def test_bounds_spectral_radius(self, rng: np.random.Generator) -> None:
        m = rng.normal(size=(8, 8))
        assert np.max(np.abs(np.linalg.eigvals(m))) <= gershgorin_bound(m) + 1e-12

    def test_empty(self) -> None:
        assert gershgorin_bound(np.zeros((0, 0))) == 0.0


class TestSparseSym:
    def test_default_diagonal_gives_zero_row_sums(self) -> None:
        s = SparseSym.from_entries(3, {(0, 1): 2.0, (2, 1): 0.5})
        np.testing.assert_allclose(s.row_sums(), np.zeros(3))
        np.testing.assert_allclose(s.to_dense(), s.to_dense().T)

    def test_reoriented_lookup(self) -> None:
        s = SparseSym.from_entries(3, [(2, 0, 1.5)])
        assert s.weight(0, 2) == 1.5
        assert s.weight(2, 0) == 1.5
        assert s.weight(0, 1) == 0.0

    def test_duplicate_rejected(self) -> None:
        with pytest.raises(ArgumentError):
            SparseSym.from_entries(3, [(0, 1, 1.0), (1, 0, 2.0)])

    def test_diagonal_entry_rejected(self) -> None:
        with pytest.raises(ArgumentError):
            SparseSym.from_entries(3, [(1, 1, 1.0)])

    def test_negative_entries(self) -> None:
        s = SparseSym.from_entries(4, {(0, 1): -0.2, (1, 2): 1.0, (2, 3): -1e-12})
        assert s.negative_entries() == [(0, 1), (2, 3)]
        assert s.negative_entries(tol=1e-10) == [(0, 1)]
        assert s.min_off_diagonal() == pytest.approx(-0.2)

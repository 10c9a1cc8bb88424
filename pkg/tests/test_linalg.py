"""Kernel tests: singular values, rank, null spaces, HPD log-det.

Expected values are frozen from independent constructions (explicit
unitaries, closed-form identities), not from the code under test.
"""

import numpy as np
import pytest

from compound_bcc.errors import (
    InvalidInputError,
    NotHermitianError,
    NotPositiveDefiniteError,
)
from compound_bcc.linalg import (
    RankTolerance,
    logdet2_hpd,
    null_space_basis,
    numerical_rank,
    singular_values,
)


def unitary_2x2(theta, phase):
    c, s = np.cos(theta), np.sin(theta)
    u = np.array([[c, -s], [s, c]], dtype=complex)
    return u * np.exp(1j * phase)


class TestSingularValues:
    def test_identity(self):
        assert np.allclose(singular_values(np.eye(3)), [1.0, 1.0, 1.0])

    def test_zero(self):
        assert np.allclose(singular_values(np.zeros((2, 5))), 0.0)

    def test_rotated_diag(self):
        # u diag(3,1) w^H has singular values exactly {3, 1}
        u = unitary_2x2(0.3, 0.7)
        w = unitary_2x2(-1.1, 0.2)
        m = u @ np.diag([3.0, 1.0]) @ w.conj().T
        sv = singular_values(m)
        assert sv.shape == (2,)
        assert abs(sv[0] - 3.0) < 1e-12
        assert abs(sv[1] - 1.0) < 1e-12

    def test_descending_order(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            m = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
            sv = singular_values(m)
            assert np.all(np.diff(sv) <= 0)

    def test_nonfinite_rejected(self):
        m = np.array([[1.0, np.nan], [0.0, 1.0]])
        with pytest.raises(InvalidInputError):
            singular_values(m)

    def test_non_2d_rejected(self):
        with pytest.raises(InvalidInputError):
            singular_values(np.zeros(3))


class TestNumericalRank:
    def test_zero_matrix_rank_zero(self):
        assert numerical_rank(np.zeros((3, 3))) == 0

    def test_full_rank_random(self):
        rng = np.random.default_rng(1)
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert numerical_rank(m) == 4

    def test_constructed_rank_deficiency(self):
        rng = np.random.default_rng(2)
        a = rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2))
        b = rng.standard_normal((2, 5)) + 1j * rng.standard_normal((2, 5))
        assert numerical_rank(a @ b) == 2

    def test_scale_invariance(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((3, 2)) @ rng.standard_normal((2, 4))
        for scale in (1e-8, 1.0, 1e8):
            assert numerical_rank(scale * a) == 2

    def test_tolerance_validation(self):
        with pytest.raises(InvalidInputError):
            RankTolerance(0.0)
        with pytest.raises(InvalidInputError):
            RankTolerance(1.0)
        with pytest.raises(InvalidInputError):
            RankTolerance(-1e-3)


class TestNullSpaceBasis:
    def test_rank_plus_nullity(self):
        rng = np.random.default_rng(4)
        for rows, cols in [(2, 4), (4, 2), (3, 3), (1, 6)]:
            m = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
            b = null_space_basis(m)
            assert numerical_rank(m) + b.shape[1] == cols

    def test_residual_and_orthonormality_sweep(self):
        tol = RankTolerance()
        rng = np.random.default_rng(5)
        for _ in range(100):
            rows = int(rng.integers(1, 6))
            cols = int(rng.integers(rows + 1, 9))
            m = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
            b = null_space_basis(m)
            assert b.shape == (cols, cols - rows)
            sigma_max = singular_values(m)[0]
            bound = 10 * tol.relative_threshold * sigma_max * np.sqrt(cols)
            assert np.linalg.norm(m @ b) <= bound
            gram = b.conj().T @ b
            assert np.linalg.norm(gram - np.eye(b.shape[1])) <= 1e-10

    def test_full_column_rank_gives_empty_basis(self):
        rng = np.random.default_rng(6)
        m = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
        b = null_space_basis(m)
        assert b.shape == (3, 0)

    def test_no_rows_gives_identity(self):
        b = null_space_basis(np.zeros((0, 4)))
        assert np.array_equal(b, np.eye(4))

    def test_deterministic(self):
        rng = np.random.default_rng(7)
        m = rng.standard_normal((2, 5)) + 1j * rng.standard_normal((2, 5))
        b1 = null_space_basis(m.copy())
        b2 = null_space_basis(m.copy())
        assert np.array_equal(b1, b2)

    def test_phase_normalization(self):
        rng = np.random.default_rng(8)
        m = rng.standard_normal((2, 5)) + 1j * rng.standard_normal((2, 5))
        b = null_space_basis(m)
        for j in range(b.shape[1]):
            col = b[:, j]
            anchor = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
            assert anchor.real > 0
            assert abs(anchor.imag) < 1e-14


class TestLogdet2Hpd:
    def test_identity_is_zero(self):
        assert logdet2_hpd(np.eye(4)) == 0.0

    def test_rank_one_update(self):
        # det(I + a a^H) = 1 + ||a||^2
        rng = np.random.default_rng(9)
        for _ in range(25):
            a = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            m = np.eye(4) + np.outer(a, a.conj())
            expected = np.log2(1 + np.linalg.norm(a) ** 2)
            assert abs(logdet2_hpd(m) - expected) < 1e-10

    def test_singular_value_identity(self):
        # log2 det(A A^H + I) = sum log2(1 + s_i^2)
        rng = np.random.default_rng(10)
        for _ in range(40):
            n = int(rng.integers(1, 9))
            k = int(rng.integers(1, 9))
            a = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
            m = a @ a.conj().T + np.eye(n)
            s = singular_values(a)
            expected = float(np.sum(np.log2(1 + s**2)))
            assert abs(logdet2_hpd(m) - expected) < 1e-9

    def test_empty_matrix(self):
        assert logdet2_hpd(np.zeros((0, 0))) == 0.0

    def test_non_hermitian_rejected(self):
        m = np.array([[1.0, 2.0], [0.0, 1.0]])
        with pytest.raises(NotHermitianError):
            logdet2_hpd(m)

    def test_indefinite_names_failing_minor(self):
        m = np.diag([4.0, 9.0, -1.0, 5.0]).astype(complex)
        with pytest.raises(NotPositiveDefiniteError) as exc:
            logdet2_hpd(m)
        assert exc.value.minor == 3
        assert "3" in str(exc.value)

    def test_first_minor_failure(self):
        with pytest.raises(NotPositiveDefiniteError) as exc:
            logdet2_hpd(np.diag([-2.0, 1.0]))
        assert exc.value.minor == 1

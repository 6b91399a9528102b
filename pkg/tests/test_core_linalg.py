"""Tests for the dense matrix kernel."""

import numpy as np
import pytest

from preserver_lab import (
    NotHermitian,
    NotPositiveDefinite,
    adjugate,
    determinant,
    hermitian_eig,
    matrix_from_json,
    matrix_to_json,
    numeric_rank,
    pd_sqrt,
    principal_root,
    takagi_factor,
)
from preserver_lab.domains import MatrixClass, sample

from oracles import det_cofactor


def _rand_complex(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


class TestDeterminant:
    def test_identity(self):
        assert determinant(np.eye(3)) == pytest.approx(1.0)

    def test_diagonal_product(self):
        assert determinant(np.diag([1.0, 2.0])) == pytest.approx(2.0)

    def test_matches_cofactor_oracle(self):
        rng = np.random.default_rng(42)
        a = _rand_complex(rng, 4)
        expected = det_cofactor(a)
        assert abs(determinant(a) - expected) <= 1e-10 * abs(expected)

    def test_exact_for_n1(self):
        z = 3.25 - 1.5j
        assert determinant(np.array([[z]])) == z

    def test_triangular_is_diagonal_product(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n = int(rng.integers(2, 8))
            t = np.triu(_rand_complex(rng, n))
            expected = complex(np.prod(np.diagonal(t)))
            assert abs(determinant(t) - expected) <= 1e-10 * (1 + abs(expected))


class TestAdjugate:
    def test_identity(self):
        for n in (1, 2, 5):
            assert np.allclose(adjugate(np.eye(n)), np.eye(n))

    def test_diag_example(self):
        b = np.diag([1.0, 2.0])
        adj = adjugate(b)
        assert np.allclose(adj, np.diag([2.0, 1.0]))
        # tr(B Adj B) = n det B
        assert np.trace(b @ adj) == pytest.approx(4.0)

    def test_product_check_random(self):
        rng = np.random.default_rng(3)
        a = _rand_complex(rng, 5)
        d = determinant(a)
        res = np.linalg.norm(a @ adjugate(a) - d * np.eye(5)) / abs(d)
        assert res <= 1e-9

    def test_product_invariant_including_singular(self):
        rng = np.random.default_rng(11)
        for k in range(30):
            n = int(rng.integers(1, 8))
            a = _rand_complex(rng, n)
            if k % 5 == 0 and n >= 2:
                a[:, -1] = a[:, 0]  # force singularity
            d = determinant(a)
            res = np.linalg.norm(a @ adjugate(a) - d * np.eye(n))
            assert res <= 1e-9 * (1.0 + np.linalg.norm(a) ** n)


class TestHermitianEig:
    def test_identity(self):
        w, v = hermitian_eig(np.eye(2))
        assert np.allclose(w, [1.0, 1.0])
        assert np.allclose(v.conj().T @ v, np.eye(2), atol=1e-12)

    def test_swap_unit_spectrum(self):
        d12 = np.array([[0.0, 1.0], [1.0, 0.0]])
        w, _ = hermitian_eig(d12)
        assert np.allclose(w, [-1.0, 1.0])

    def test_reconstruction(self):
        a = sample(MatrixClass.HERMITIAN, 6, 5)
        w, v = hermitian_eig(a)
        assert np.all(np.diff(w) >= 0)
        assert np.linalg.norm((v * w) @ v.conj().T - a) <= 1e-9
        assert np.linalg.norm(v.conj().T @ v - np.eye(6)) <= 1e-9

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestPdSqrt:
    def test_scalar_multiple(self):
        assert np.allclose(pd_sqrt(4.0 * np.eye(3)), 2.0 * np.eye(3))

    def test_diagonal(self):
        assert np.allclose(pd_sqrt(np.diag([1.0, 4.0, 9.0])), np.diag([1.0, 2.0, 3.0]))

    def test_squares_back(self):
        a = sample(MatrixClass.PD, 5, 9)
        s = pd_sqrt(a)
        assert np.linalg.norm(s @ s - a) / np.linalg.norm(a) <= 1e-9
        assert np.linalg.norm(s - s.conj().T) <= 1e-10 * (1 + np.linalg.norm(s))
        assert np.linalg.eigvalsh(s)[0] > 0

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            pd_sqrt(np.diag([1.0, -1.0]))


class TestNumericRank:
    def test_zero(self):
        assert numeric_rank(np.zeros((3, 3)), 1e-7) == 0

    def test_outer_product(self):
        rng = np.random.default_rng(1)
        u = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        w = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        assert numeric_rank(np.outer(u, w), 1e-7) == 1

    def test_swap_operator_full_rank(self):
        # J[(i,a),(j,b)] = delta_{aj} delta_{bi} on n=2: a 4x4 permutation
        n = 2
        j = np.zeros((n * n, n * n))
        for i in range(n):
            for a in range(n):
                for jj in range(n):
                    for b in range(n):
                        if a == jj and b == i:
                            j[i * n + a, jj * n + b] = 1.0
        sv = np.linalg.svd(j, compute_uv=False)
        assert np.allclose(sv, 1.0)  # permutation matrix: all singular values 1
        assert numeric_rank(j, 1e-7) == 4

    def test_ratio_tol_validation(self):
        with pytest.raises(ValueError):
            numeric_rank(np.eye(2), 0.0)
        with pytest.raises(ValueError):
            numeric_rank(np.eye(2), 1.0)


class TestPrincipalRoot:
    def test_positive_real(self):
        r = principal_root(32.0, 5)
        assert r.imag == 0.0
        assert r.real == pytest.approx(2.0)

    def test_root_power_identity(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            z = complex(rng.standard_normal(), rng.standard_normal())
            k = int(rng.integers(2, 7))
            assert abs(principal_root(z, k) ** k - z) <= 1e-12 * (1 + abs(z))

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            principal_root(0.0, 3)


class TestTakagiFactor:
    def test_identity(self):
        q = takagi_factor(np.eye(3))
        assert np.linalg.norm(q @ q.T - np.eye(3)) <= 1e-10

    def test_offdiagonal_unit(self):
        c = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        q = takagi_factor(c)
        assert np.linalg.norm(q @ q.T - c) <= 1e-10

    def test_random_symmetric(self):
        rng = np.random.default_rng(6)
        for k in range(25):
            n = int(rng.integers(1, 7))
            g = _rand_complex(rng, n)
            c = g + g.T
            if abs(determinant(c)) < 1e-6:
                continue
            q = takagi_factor(c)
            assert np.linalg.norm(q @ q.T - c) <= 1e-8 * (1 + np.linalg.norm(c))


class TestMatrixJson:
    def test_roundtrip(self):
        a = sample(MatrixClass.FULL, 4, 0)
        assert np.array_equal(matrix_from_json(matrix_to_json(a)), a)

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            matrix_from_json({"n": 2, "re": [[1.0]], "im": [[0.0]]})
        with pytest.raises(ValueError):
            matrix_from_json({"n": 2, "re": [[1.0, 0.0], [0.0, 1.0]]})

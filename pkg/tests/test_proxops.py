import numpy as np
import pytest

from cbfmsc.proxops import (
    DegenerateMatrixError,
    procrustes,
    prox_l21,
    soft_threshold,
    svt,
    trace_norm,
)


def random_orthonormal(rng, n, k):
    Q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    return Q[:, :k]


class TestSoftThreshold:
    def test_above(self):
        assert soft_threshold(3.0, 1.0) == 2.0

    def test_below(self):
        assert soft_threshold(-3.0, 1.0) == -2.0

    def test_dead_zone(self):
        assert soft_threshold(0.5, 1.0) == 0.0

    def test_negative_eps_rejected(self):
        with pytest.raises(ValueError):
            soft_threshold(1.0, -0.1)


class TestProxL21:
    def test_zero_input(self):
        out = prox_l21(np.zeros((4, 3)), 1.0)
        assert np.array_equal(out, np.zeros((4, 3)))

    def test_single_column_scaling(self):
        # Column [3,4] has norm 5; shrinkage by tau=1 scales it by 4/5.
        out = prox_l21(np.array([[3.0], [4.0]]), 1.0)
        np.testing.assert_allclose(out, [[2.4], [3.2]], atol=1e-12)

    def test_below_threshold_column_zeroed(self):
        T = np.array([[0.3], [0.4]])  # norm 0.5 < tau
        assert np.array_equal(prox_l21(T, 1.0), np.zeros((2, 1)))

    def test_nonpositive_tau_rejected(self):
        with pytest.raises(ValueError):
            prox_l21(np.ones((2, 2)), 0.0)

    def test_column_norm_identity(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            T = rng.standard_normal((5, 8)) * rng.uniform(0.1, 3)
            tau = rng.uniform(0.05, 2)
            out = prox_l21(T, tau)
            expect = np.maximum(0.0, np.linalg.norm(T, axis=0) - tau)
            np.testing.assert_allclose(np.linalg.norm(out, axis=0), expect, atol=1e-12)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            prox_l21(np.array([[np.nan], [1.0]]), 1.0)


class TestSvt:
    def test_tau_zero_identity(self):
        rng = np.random.default_rng(1)
        A = rng.standard_normal((5, 4))
        out = svt(A, 0.0)
        assert np.linalg.norm(out - A) <= 1e-10 * np.linalg.norm(A)

    def test_diagonal_thresholding(self):
        out = svt(np.diag([3.0, 1.0]), 2.0)
        np.testing.assert_allclose(out, np.diag([1.0, 0.0]), atol=1e-12)

    def test_zero_input(self):
        assert np.array_equal(svt(np.zeros((3, 3)), 1.0), np.zeros((3, 3)))

    def test_negative_tau_rejected(self):
        with pytest.raises(ValueError):
            svt(np.eye(2), -1.0)

    def test_firmly_nonexpansive(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            A = rng.standard_normal((5, 6))
            B = rng.standard_normal((5, 6))
            tau = rng.uniform(0, 2)
            lhs = np.linalg.norm(svt(A, tau) - svt(B, tau))
            assert lhs <= np.linalg.norm(A - B) + 1e-12


class TestProcrustes:
    def test_orthonormal_fixed_point(self):
        rng = np.random.default_rng(3)
        M = random_orthonormal(rng, 6, 3)
        np.testing.assert_allclose(procrustes(M), M, atol=1e-10)

    def test_scale_invariance(self):
        rng = np.random.default_rng(4)
        M0 = random_orthonormal(rng, 6, 3)
        np.testing.assert_allclose(procrustes(2.0 * M0), M0, atol=1e-10)

    def test_orthonormal_columns(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            U = procrustes(rng.standard_normal((7, 3)))
            assert np.linalg.norm(U.T @ U - np.eye(3)) <= 1e-10

    def test_beats_random_candidates(self):
        rng = np.random.default_rng(6)
        M = rng.standard_normal((6, 3))
        U = procrustes(M)
        ours = np.trace(U.T @ M)
        cands = rng.standard_normal((2000, 6, 3))
        Q, _ = np.linalg.qr(cands)
        traces = np.einsum("bij,ij->b", Q, M)
        assert ours >= traces.max() - 1e-10

    def test_zero_matrix_rejected(self):
        with pytest.raises(DegenerateMatrixError):
            procrustes(np.zeros((4, 2)))

    def test_wide_matrix_rejected(self):
        with pytest.raises(ValueError):
            procrustes(np.ones((2, 4)))


class TestTraceNorm:
    def test_identity(self):
        assert trace_norm(np.eye(3)) == pytest.approx(3.0)

    def test_diagonal_absolute_values(self):
        assert trace_norm(np.diag([3.0, -4.0])) == pytest.approx(7.0)

    def test_invariant_under_orthonormal_factor(self):
        # Z = UV with orthonormal-column U has the same singular values as V.
        rng = np.random.default_rng(8)
        for _ in range(20):
            n = rng.integers(6, 20)
            k = rng.integers(2, 6)
            U = random_orthonormal(rng, n, k)
            V = rng.standard_normal((k, n))
            tv = trace_norm(V)
            assert abs(trace_norm(U @ V) - tv) <= 1e-8 * max(1.0, tv)

import numpy as np
import pytest

from netred.errors import KernelConditionViolated, NotHurwitz, NotSymmetric
from netred.generators import path_graph
from netred.graphcore import laplacian_from_graph
from netred.linalg import (
    StateSpace,
    is_hurwitz,
    kron,
    pinv,
    solve_lyapunov,
    solve_lyapunov_with_kernel,
    stable_unstable_split,
    sym_eig,
)

from .support import PATH5_LAPLACIAN, lyap_kron_oracle, random_hurwitz


class TestSymEig:
    def test_identity(self):
        eig = sym_eig(np.eye(3))
        np.testing.assert_allclose(eig.eigenvalues, [1.0, 1.0, 1.0])
        u = eig.eigenvectors
        assert np.abs(u.T @ u - np.eye(3)).max() <= 1e-10

    def test_path5_has_simple_zero(self):
        eig = sym_eig(PATH5_LAPLACIAN)
        assert abs(eig.eigenvalues[0]) <= 1e-12
        assert eig.eigenvalues[1] > 1e-9

    def test_reconstruction_random(self):
        rng = np.random.default_rng(0)
        m = rng.normal(size=(6, 6))
        m = m + m.T
        eig = sym_eig(m)
        rebuilt = (eig.eigenvectors * eig.eigenvalues) @ eig.eigenvectors.T
        assert np.abs(rebuilt - m).max() <= 1e-9 * (1 + np.abs(m).max())

    def test_rejects_asymmetric(self):
        with pytest.raises(NotSymmetric):
            sym_eig([[0.0, 1.0], [0.0, 0.0]])


class TestPinv:
    def test_diagonal(self):
        np.testing.assert_allclose(pinv(np.diag([0.0, 2.0])), np.diag([0.0, 0.5]), atol=1e-14)

    def test_path5_projector_identity(self):
        lap = PATH5_LAPLACIAN
        expected = np.eye(5) - np.ones((5, 5)) / 5.0
        assert np.abs(lap @ pinv(lap) - expected).max() <= 1e-10

    def test_zero_matrix(self):
        np.testing.assert_array_equal(pinv(np.zeros((3, 3))), np.zeros((3, 3)))

    def test_moore_penrose_identities_random(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            n = int(rng.integers(2, 7))
            rank = int(rng.integers(1, n))
            g = rng.normal(size=(n, rank))
            m = g @ g.T  # symmetric PSD, rank deficient
            m_plus = pinv(m)
            for lhs, rhs in (
                (m @ m_plus @ m, m),
                (m_plus @ m @ m_plus, m_plus),
                ((m @ m_plus).T, m @ m_plus),
                ((m_plus @ m).T, m_plus @ m),
            ):
                assert np.abs(lhs - rhs).max() <= 1e-8


class TestKron:
    def test_identity_block_diag(self):
        m = np.array([[1.0, 2.0], [3.0, 4.0]])
        out = kron(np.eye(2), m)
        expected = np.block([[m, np.zeros((2, 2))], [np.zeros((2, 2)), m]])
        np.testing.assert_array_equal(out, expected)

    def test_ones_times_basis(self):
        out = kron(np.ones((2, 1)), np.array([[1.0], [0.0]]))
        np.testing.assert_array_equal(out, np.array([[1.0], [0.0], [1.0], [0.0]]))

    def test_mixed_product_identity(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            a, b, c, d = (rng.normal(size=(2, 2)) for _ in range(4))
            lhs = kron(a, b) @ kron(c, d)
            rhs = kron(a @ c, b @ d)
            assert np.abs(lhs - rhs).max() <= 1e-12


class TestIsHurwitz:
    def test_scalar_cases(self):
        assert is_hurwitz([[-1.0]])
        assert not is_hurwitz([[0.0]])
        # single integrator coupled at lam = 2: A - lam B = -2
        assert is_hurwitz([[0.0 - 2.0 * 1.0]])


class TestSolveLyapunov:
    def test_scalar(self):
        np.testing.assert_allclose(solve_lyapunov([[-1.0]], [[1.0]]), [[0.5]])

    def test_single_integrator_gramian(self):
        lam = 3.0
        x = solve_lyapunov([[-lam]], [[lam * lam]])
        np.testing.assert_allclose(x, [[lam / 2.0]])

    def test_residual_random(self):
        rng = np.random.default_rng(3)
        a = random_hurwitz(rng, 4)
        g = rng.normal(size=(4, 4))
        q = g @ g.T
        x = solve_lyapunov(a, q)
        residual = np.abs(a.T @ x + x @ a + q).max()
        assert residual <= 1e-8 * (1 + np.abs(q).max())
        assert np.linalg.eigvalsh(x).min() >= -1e-9

    @pytest.mark.parametrize("n", [2, 5, 10, 20])
    def test_residual_up_to_dim_20(self, n):
        rng = np.random.default_rng(100 + n)
        a = random_hurwitz(rng, n)
        g = rng.normal(size=(n, n))
        q = g @ g.T
        x = solve_lyapunov(a, q)
        assert np.abs(a.T @ x + x @ a + q).max() <= 1e-8 * (1 + np.abs(q).max())

    def test_matches_kron_vectorization_oracle(self):
        rng = np.random.default_rng(4)
        for n in (2, 3, 5):
            a = random_hurwitz(rng, n)
            g = rng.normal(size=(n, n))
            q = g @ g.T
            np.testing.assert_allclose(
                solve_lyapunov(a, q), lyap_kron_oracle(a, q), atol=1e-9
            )

    def test_rejects_unstable(self):
        with pytest.raises(NotHurwitz):
            solve_lyapunov([[0.0]], [[1.0]])


class TestStableUnstableSplit:
    def test_invariance(self):
        rng = np.random.default_rng(5)
        a = np.block(
            [[random_hurwitz(rng, 3), rng.normal(size=(3, 2))], [np.zeros((2, 3)), np.eye(2)]]
        )
        v_s, a_s, v_u = stable_unstable_split(a)
        assert v_s.shape[1] == 3 and v_u.shape[1] == 2
        assert np.abs(a @ v_s - v_s @ a_s).max() <= 1e-10


class TestSolveLyapunovWithKernel:
    def test_decoupled_scalar(self):
        a = np.diag([-1.0, 0.0])
        b = np.array([[1.0], [1.0]])
        c = np.array([[1.0, 0.0]])
        x, h2sq = solve_lyapunov_with_kernel(a, b, c)
        np.testing.assert_allclose(x, np.diag([0.5, 0.0]), atol=1e-12)
        assert abs(h2sq - 0.5) <= 1e-12

    def test_violation_raises(self):
        a = np.diag([-1.0, 0.0])
        b = np.array([[1.0], [1.0]])
        c = np.array([[0.0, 1.0]])  # observes the zero mode
        with pytest.raises(KernelConditionViolated):
            solve_lyapunov_with_kernel(a, b, c)

    def test_agrees_with_plain_solve_for_hurwitz(self):
        rng = np.random.default_rng(6)
        a = random_hurwitz(rng, 5)
        b = rng.normal(size=(5, 2))
        c = rng.normal(size=(3, 5))
        x_kernel, h2sq = solve_lyapunov_with_kernel(a, b, c)
        x_plain = solve_lyapunov(a, c.T @ c)
        assert np.abs(x_kernel - x_plain).max() <= 1e-9
        assert abs(h2sq - np.trace(b.T @ x_plain @ b)) <= 1e-9

    def test_psd_and_kernel_containment(self):
        # network-style marginal system: K2 single integrator, one leader
        lap = laplacian_from_graph(path_graph(2)).mat
        x, h2sq = solve_lyapunov_with_kernel(-lap, np.array([[1.0], [0.0]]), lap)
        assert abs(h2sq - 0.5) <= 1e-12
        assert np.linalg.eigvalsh(x).min() >= -1e-12
        ones = np.ones(2) / np.sqrt(2)
        assert np.abs(x @ ones).max() <= 1e-12


class TestStateSpace:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            StateSpace(A=np.eye(2), B=np.ones((3, 1)), C=np.ones((1, 2)))
        with pytest.raises(ValueError):
            StateSpace(A=np.eye(2), B=np.ones((2, 1)), C=np.ones((1, 3)))

    def test_response_scalar(self):
        sys = StateSpace(A=[[-1.0]], B=[[1.0]], C=[[1.0]])
        val = sys.response(1j * 1.0)
        np.testing.assert_allclose(val, [[1.0 / (1j + 1.0)]])

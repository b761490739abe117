import numpy as np
import pytest

from dmabeam import numerics


def random_hermitian(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (a + a.conj().T)


class TestHermitianEig:
    def test_identity(self):
        r = numerics.hermitian_eig(np.eye(2, dtype=complex))
        assert np.allclose(r.eigenvalues, [1.0, 1.0])

    def test_diagonal(self):
        r = numerics.hermitian_eig(np.diag([2.0, -1.0]).astype(complex))
        assert np.allclose(r.eigenvalues, [2.0, -1.0])
        assert np.allclose(np.abs(r.eigenvectors), np.eye(2))

    def test_reconstruction_residual_8x8(self):
        rng = np.random.default_rng(42)
        m = random_hermitian(rng, 8)
        r = numerics.hermitian_eig(m)
        rec = (r.eigenvectors * r.eigenvalues) @ r.eigenvectors.conj().T
        assert np.linalg.norm(m - rec) <= 1e-10 * max(1.0, np.linalg.norm(m))

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 9, 16])
    def test_invariants_random(self, n):
        rng = np.random.default_rng(n)
        for scale in [1.0, 1e-6, 1e4]:
            m = random_hermitian(rng, n, scale)
            r = numerics.hermitian_eig(m)
            fro = np.linalg.norm(m)
            v = r.eigenvectors
            assert np.all(np.diff(r.eigenvalues) <= 1e-12 * max(1, fro))
            rec = (v * r.eigenvalues) @ v.conj().T
            assert np.linalg.norm(m - rec) <= 1e-10 * max(1.0, fro)
            assert np.abs(v.conj().T @ v - np.eye(n)).max() <= 1e-10
            # eigenvalue sum equals trace
            tr = np.real(np.trace(m))
            assert abs(r.eigenvalues.sum() - tr) <= 1e-10 * max(1.0, abs(tr))

    def test_psd_eigenvalues_nonnegative(self):
        rng = np.random.default_rng(5)
        for n in [2, 4, 7]:
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            m = a @ a.conj().T
            r = numerics.hermitian_eig(m)
            assert np.all(r.eigenvalues >= -1e-10 * np.linalg.norm(m))

    def test_zero_matrix_standard_basis(self):
        r = numerics.hermitian_eig(np.zeros((4, 4), dtype=complex))
        assert np.all(r.eigenvalues == 0.0)
        assert np.allclose(r.eigenvectors, np.eye(4))

    def test_degenerate_multiplicity(self):
        rng = np.random.default_rng(11)
        q, _ = np.linalg.qr(rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
        m = q[:, :3] @ q[:, :3].conj().T  # projector, eigenvalues {1,1,1,0,0,0}
        r = numerics.hermitian_eig(m)
        assert np.allclose(np.sort(r.eigenvalues), [0, 0, 0, 1, 1, 1], atol=1e-12)
        rec = (r.eigenvectors * r.eigenvalues) @ r.eigenvectors.conj().T
        assert np.linalg.norm(m - rec) <= 1e-12

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            numerics.hermitian_eig(np.ones((2, 3)))
        with pytest.raises(ValueError):
            numerics.hermitian_eig(np.array([[0.0, 1.0], [2.0, 0.0]]))
        with pytest.raises(ValueError):
            numerics.hermitian_eig(np.array([[np.nan, 0], [0, 1.0]]))


class TestKronVec:
    def test_kron_identities(self):
        assert np.allclose(numerics.kron(np.eye(2), np.eye(2)), np.eye(4))
        row = np.array([[1.0, 2.0]])
        expected = np.concatenate([np.eye(2), 2 * np.eye(2)], axis=1)
        assert np.allclose(numerics.kron(row, np.eye(2)), expected)

    def test_vec_identity_and_roundtrip(self):
        assert np.allclose(numerics.vec(np.eye(2)), [1, 0, 0, 1])
        row = np.array([[3.0, 1.0, 4.0]])
        assert np.allclose(numerics.vec(row), row.ravel())
        rng = np.random.default_rng(0)
        m = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
        assert np.array_equal(numerics.unvec(numerics.vec(m), 4, 3), m)

    def test_vectorization_identity(self):
        # A^T Q b == (b^T kron A^T) vec(Q), evaluated independently on both sides
        rng = np.random.default_rng(1)
        for _ in range(20):
            a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            q = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            b = rng.standard_normal((3, 1)) + 1j * rng.standard_normal((3, 1))
            lhs = a.T @ q @ b
            rhs = numerics.kron(b.T, a.T) @ numerics.vec(q)
            err = np.linalg.norm(lhs.ravel() - rhs.ravel())
            assert err <= 1e-10 * max(1.0, np.linalg.norm(lhs))


class TestUnits:
    def test_dbm_definition(self):
        assert numerics.dbm_to_watts(0.0) == pytest.approx(1e-3, rel=1e-15)

    def test_noise_floor_value(self):
        # direct evaluation of 10^((-114-30)/10)
        assert numerics.dbm_to_watts(-114.0) == pytest.approx(3.9811e-15, rel=1e-4)
        assert numerics.dbm_to_watts(-114.0) == pytest.approx(10.0 ** (-14.4), rel=1e-15)

    def test_round_trip(self):
        assert numerics.watts_to_dbm(numerics.dbm_to_watts(17.3)) == pytest.approx(
            17.3, rel=1e-12
        )
        grid = np.linspace(-200.0, 100.0, 301)
        back = numerics.watts_to_dbm(numerics.dbm_to_watts(grid))
        assert np.allclose(back, grid, rtol=1e-12, atol=1e-12)

    def test_zero_watts_sentinel(self):
        assert numerics.watts_to_dbm(0.0) == -np.inf

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            numerics.dbm_to_watts(np.inf)

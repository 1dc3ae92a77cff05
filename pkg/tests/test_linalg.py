import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from digsp.errors import ValidationError
from digsp.linalg import psd_sqrt, schur_complex, svd, sym_eig

from conftest import assert_multiset_close, char_poly_coeffs


class TestSvd:
    def test_identity(self):
        f = svd(np.eye(3))
        npt.assert_allclose(f.left_vectors, np.eye(3))
        npt.assert_allclose(f.right_vectors, np.eye(3))
        npt.assert_allclose(f.singular_values, np.ones(3))

    def test_diagonal_with_negative(self):
        a = np.diag([3.0, -2.0])
        f = svd(a)
        npt.assert_allclose(f.singular_values, [3.0, 2.0])
        reco = (f.left_vectors * f.singular_values) @ f.right_vectors.T
        npt.assert_allclose(reco, a, atol=1e-14)

    def test_random_reconstruction(self, rng):
        a = rng.standard_normal((5, 5))
        f = svd(a)
        reco = (f.left_vectors * f.singular_values) @ f.right_vectors.T
        assert np.linalg.norm(reco - a) / np.linalg.norm(a) <= 1e-12

    def test_orthogonality_and_order(self, rng):
        a = rng.standard_normal((8, 8))
        f = svd(a)
        npt.assert_allclose(f.left_vectors.T @ f.left_vectors, np.eye(8), atol=1e-10)
        npt.assert_allclose(f.right_vectors.T @ f.right_vectors, np.eye(8), atol=1e-10)
        assert np.all(np.diff(f.singular_values) <= 0)
        assert np.all(f.singular_values >= 0)

    def test_sign_convention_on_left_vectors(self, rng):
        a = rng.standard_normal((6, 6))
        u = svd(a).left_vectors
        pivots = u[np.argmax(np.abs(u), axis=0), np.arange(6)]
        assert np.all(pivots > 0)

    def test_determinism(self, rng):
        a = rng.standard_normal((7, 7))
        f1, f2 = svd(a), svd(a.copy())
        assert f1.left_vectors.tobytes() == f2.left_vectors.tobytes()
        assert f1.right_vectors.tobytes() == f2.right_vectors.tobytes()

    def test_rejects_bad_input(self):
        with pytest.raises(ValidationError):
            svd(np.ones((2, 3)))
        with pytest.raises(ValidationError):
            svd(np.array([[1.0, np.nan], [0.0, 1.0]]))

    def test_dense_size_cap(self, monkeypatch):
        import digsp.linalg as linalg

        monkeypatch.setattr(linalg, "MAX_DENSE_N", 4)
        with pytest.raises(ValidationError):
            svd(np.eye(5))
        svd(np.eye(4))


class TestSymEig:
    def test_identity(self):
        f = sym_eig(np.eye(4))
        npt.assert_allclose(f.values, np.ones(4))

    def test_diagonal(self):
        f = sym_eig(np.diag([2.0, 5.0]))
        npt.assert_allclose(f.values, [5.0, 2.0])

    def test_random_reconstruction(self, rng):
        s = rng.standard_normal((6, 6))
        s = s + s.T
        f = sym_eig(s)
        reco = (f.vectors * f.values) @ f.vectors.T
        assert np.linalg.norm(reco - s) <= 1e-11 * np.linalg.norm(s)
        npt.assert_allclose(f.vectors.T @ f.vectors, np.eye(6), atol=1e-10)
        assert np.all(np.diff(f.values) <= 0)

    def test_rejects_asymmetric(self, rng):
        with pytest.raises(ValidationError):
            sym_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestPsdSqrt:
    def test_identity(self):
        npt.assert_allclose(psd_sqrt(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        npt.assert_allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))

    def test_square_reconstruction(self, rng):
        a = rng.standard_normal((5, 5))
        s = a @ a.T
        r = psd_sqrt(s)
        assert np.linalg.norm(r @ r - s) <= 1e-9 * max(1.0, np.linalg.norm(s))
        npt.assert_allclose(r, r.T)
        assert sym_eig(r).values.min() >= -1e-10 * np.linalg.norm(r)

    def test_rejects_indefinite(self):
        with pytest.raises(ValidationError):
            psd_sqrt(np.diag([1.0, -1.0]))


def _cycle(n):
    a = np.zeros((n, n))
    a[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    return a


class TestSchurComplex:
    def test_symmetric_is_diagonal(self, rng):
        s = rng.standard_normal((6, 6))
        s = s + s.T
        f = schur_complex(s)
        t = f.triangular
        assert np.abs(t - np.diag(np.diag(t))).max() <= 1e-8 * np.linalg.norm(s)
        assert np.abs(f.eigenvalues.imag).max() <= 1e-10

    def test_nilpotent_path(self):
        a = np.zeros((4, 4))
        a[np.arange(1, 4), np.arange(3)] = 1.0
        f = schur_complex(a)
        assert np.abs(f.eigenvalues).max() <= 1e-12
        assert np.abs(np.tril(f.triangular)).max() <= 1e-10
        u = f.unitary
        npt.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-10)

    def test_three_cycle_frequency_order(self):
        # roots of lambda^3 = 1, direct computation
        roots = np.roots([1.0, 0.0, 0.0, -1.0])
        f = schur_complex(_cycle(3), ordering="by-frequency")
        assert_multiset_close(f.eigenvalues, roots, tol=1e-8)
        npt.assert_allclose(f.eigenvalues[0], 1.0, atol=1e-10)

    def test_by_modulus_ordering(self, rng):
        a = rng.standard_normal((8, 8))
        f = schur_complex(a, ordering="by-modulus-desc")
        mods = np.abs(f.eigenvalues)
        assert np.all(np.diff(mods) <= 1e-10)

    def test_none_ordering_reconstructs(self, rng):
        a = rng.standard_normal((5, 5))
        f = schur_complex(a, ordering="none")
        reco = f.unitary @ f.triangular @ f.unitary.conj().T
        assert np.linalg.norm(reco - a) <= 1e-9 * np.linalg.norm(a)

    def test_reconstruction_large(self, rng):
        a = rng.standard_normal((200, 200))
        f = schur_complex(a)
        reco = f.unitary @ f.triangular @ f.unitary.conj().T
        assert np.linalg.norm(reco - a) <= 1e-9 * np.linalg.norm(a)
        u = f.unitary
        assert np.abs(u.conj().T @ u - np.eye(200)).max() <= 1e-10

    def test_strictly_lower_is_zero(self, rng):
        a = rng.standard_normal((9, 9))
        f = schur_complex(a)
        assert np.abs(f.triangular[np.tril_indices(9, -1)]).max() == 0.0

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_eigenvalues_match_char_poly(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((4, 4))
        roots = np.roots(char_poly_coeffs(a))
        f = schur_complex(a)
        assert_multiset_close(f.eigenvalues, roots, tol=1e-8)

    def test_phase_convention(self, rng):
        a = rng.standard_normal((6, 6))
        u = schur_complex(a).unitary
        idx = np.argmax(np.abs(u), axis=0)
        pivots = u[idx, np.arange(6)]
        assert np.abs(pivots.imag).max() <= 1e-12
        assert np.all(pivots.real > 0)

    def test_determinism(self, rng):
        a = rng.standard_normal((10, 10))
        f1, f2 = schur_complex(a), schur_complex(a.copy())
        assert f1.unitary.tobytes() == f2.unitary.tobytes()
        assert f1.triangular.tobytes() == f2.triangular.tobytes()

    def test_rejects_bad_ordering(self):
        with pytest.raises(ValidationError):
            schur_complex(np.eye(2), ordering="bogus")

    def test_repeated_eigenvalues_survive_reordering(self):
        # cycle blocks give repeated eigenvalue clusters across the diagonal
        a = np.kron(np.eye(3), _cycle(4))
        f = schur_complex(a)
        reco = f.unitary @ f.triangular @ f.unitary.conj().T
        assert np.linalg.norm(reco - a) <= 1e-9 * np.linalg.norm(a)
        freqs = np.abs(np.abs(f.eigenvalues).max() - f.eigenvalues)
        assert np.all(np.diff(freqs) >= -1e-11)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=2, max_value=12))
def test_decomposition_residuals_property(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) * rng.uniform(0.1, 10.0)
    norm = np.linalg.norm(a)

    f = svd(a)
    assert np.linalg.norm((f.left_vectors * f.singular_values) @ f.right_vectors.T - a) <= 1e-9 * max(1.0, norm)

    g = schur_complex(a)
    assert np.linalg.norm(g.unitary @ g.triangular @ g.unitary.conj().T - a) <= 1e-9 * max(1.0, norm)
    assert np.abs(g.unitary.conj().T @ g.unitary - np.eye(n)).max() <= 1e-10

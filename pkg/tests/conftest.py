import numpy as np
import pytest


def assert_multiset_close(a, b, tol=1e-8):
    """Each element of a must match a distinct element of b within tol."""
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = list(np.asarray(b, dtype=complex).reshape(-1))
    assert len(a) == len(b)
    for x in a:
        dists = [abs(x - y) for y in b]
        k = int(np.argmin(dists))
        assert dists[k] <= tol, f"no match for {x}: nearest {b[k]} at {dists[k]:.3e}"
        b.pop(k)


def char_poly_coeffs(a):
    """Characteristic polynomial coefficients by the Faddeev-LeVerrier
    recursion (trace arithmetic only, independent of any eigensolver)."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    coeffs = np.zeros(n + 1)
    coeffs[0] = 1.0
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[k - 1] * np.eye(n)
        coeffs[k] = -np.trace(a @ m) / k
    return coeffs


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

"""Dense decomposition kernels: SVD, symmetric eigendecomposition, complex Schur
with eigenvalue reordering, and a PSD matrix square root.

All factors follow a fixed sign/phase convention so that identical inputs
produce identical factor bytes: every vector column is scaled so that its
largest-magnitude entry (lowest index on ties) is real and positive.  For the
SVD the convention is applied to the left vectors and the right vectors are
flipped in tandem; for the Schur form the phase fix is a diagonal unitary
applied on the right of U and compensated in T.

Matrix arguments are dense square float arrays; sizes are capped at
``MAX_DENSE_N`` (reassignable module global).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericalError, ValidationError

#: Largest matrix order accepted by the kernels.  Dense-only storage; raise it
#: deliberately if you have the memory for it.
MAX_DENSE_N = 2000

#: Eigenvalue orderings understood by :func:`schur_complex`.
SCHUR_ORDERINGS = ("by-frequency", "by-modulus-desc", "none")

_SWAP_SKIP_TOL = 1e-12  # adjacent swaps of eigenvalues closer than this are no-ops


@dataclass(frozen=True)
class SvdFactors:
    """A = left_vectors @ diag(singular_values) @ right_vectors.T."""

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray

    @property
    def n(self) -> int:
        return self.singular_values.shape[0]


@dataclass(frozen=True)
class SymEigFactors:
    """S = vectors @ diag(values) @ vectors.T with values nonincreasing."""

    vectors: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class ComplexSchurFactors:
    """A = unitary @ triangular @ unitary.conj().T with triangular upper."""

    unitary: np.ndarray
    triangular: np.ndarray
    eigenvalues: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


def _check_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"{name} must be square 2-D, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValidationError(f"{name} must have at least one row")
    if a.shape[0] > MAX_DENSE_N:
        raise ValidationError(
            f"{name} order {a.shape[0]} exceeds dense cap {MAX_DENSE_N}"
        )
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} contains non-finite entries")
    return a


def _fix_signs(vectors: np.ndarray, partners: np.ndarray | None = None) -> None:
    """Flip column signs in place so the largest-|entry| of each column is > 0.

    Ties are broken by the lowest entry index.  If ``partners`` is given its
    columns are flipped in tandem (SVD pairs share one sign).
    """
    idx = np.argmax(np.abs(vectors), axis=0)
    flip = vectors[idx, np.arange(vectors.shape[1])] < 0.0
    vectors[:, flip] *= -1.0
    if partners is not None:
        partners[:, flip] *= -1.0


def svd(a: np.ndarray) -> SvdFactors:
    """Full SVD of a square real matrix with the package sign convention.

    The convention pins the left singular vectors; each right vector inherits
    its pair's flip, keeping ``U @ diag(s) @ V.T == A``.
    """
    a = _check_square(a)
    u, s, vh = np.linalg.svd(a)
    v = vh.T.copy()
    u = u.copy()
    _fix_signs(u, v)
    return SvdFactors(left_vectors=u, singular_values=s, right_vectors=v)


def sym_eig(s: np.ndarray) -> SymEigFactors:
    """Eigendecomposition of a symmetric matrix, eigenvalues nonincreasing.

    Inputs asymmetric beyond ``1e-8 * ||S||_F`` are rejected; smaller
    asymmetries are removed by averaging with the transpose.
    """
    s = _check_square(s)
    norm = np.linalg.norm(s)
    if np.abs(s - s.T).max() > 1e-8 * max(1.0, norm):
        raise ValidationError("matrix is not symmetric within tolerance")
    s = 0.5 * (s + s.T)
    values, vectors = np.linalg.eigh(s)
    values = values[::-1].copy()
    vectors = vectors[:, ::-1].copy()
    _fix_signs(vectors)
    return SymEigFactors(vectors=vectors, values=values)


def psd_sqrt(s: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root: returns R with R @ R == S.

    Eigenvalues down to ``-1e-10 * ||S||_F`` are clamped to zero; anything
    more negative is treated as a genuinely indefinite input and rejected.
    """
    s = np.asarray(s, dtype=float)
    eig = sym_eig(s)
    floor = -1e-10 * max(1.0, np.linalg.norm(s))
    if eig.values.min(initial=0.0) < floor:
        raise ValidationError(
            f"matrix is not PSD: smallest eigenvalue {eig.values.min():.3e}"
        )
    vals = np.sqrt(np.clip(eig.values, 0.0, None))
    root = (eig.vectors * vals) @ eig.vectors.T
    return 0.5 * (root + root.T)


def _ordering_keys(eigenvalues: np.ndarray, ordering: str) -> list[tuple]:
    """Sort key per eigenvalue; lexicographic tuples make ties deterministic."""
    moduli = np.abs(eigenvalues)
    top = moduli.max(initial=0.0)
    if ordering == "by-frequency":
        primary = np.abs(top - eigenvalues)
    elif ordering == "by-modulus-desc":
        primary = -moduli
    else:
        raise ValidationError(f"unknown ordering {ordering!r}")
    return [
        (primary[i], -eigenvalues[i].imag, -eigenvalues[i].real)
        for i in range(eigenvalues.shape[0])
    ]


def _swap_plan(eigenvalues: np.ndarray, ordering: str) -> list[int]:
    """Adjacent-swap sequence that bubble-sorts the diagonal into ``ordering``.

    Swaps between eigenvalues closer than ``_SWAP_SKIP_TOL`` are skipped: the
    pair is treated as already ordered, which keeps the plan stable for
    multiple eigenvalues.
    """
    keys = _ordering_keys(eigenvalues, ordering)
    perm = list(range(len(keys)))
    swaps: list[int] = []
    changed = True
    while changed:
        changed = False
        for k in range(len(perm) - 1):
            i, j = perm[k], perm[k + 1]
            if abs(eigenvalues[i] - eigenvalues[j]) <= _SWAP_SKIP_TOL:
                continue
            if keys[i] > keys[j]:
                perm[k], perm[k + 1] = j, i
                swaps.append(k)
                changed = True
    return swaps


def _swap_adjacent(t: np.ndarray, u: np.ndarray, k: int) -> None:
    """Exchange diagonal entries k, k+1 of the Schur form by a unitary similarity.

    Rotates with the 2x2 unitary whose first column is the (k,k+1)-block
    eigenvector for the lower eigenvalue; triangularity is preserved and the
    two diagonal entries are re-pinned to their exact previous values so the
    eigenvalue multiset never drifts across long swap sequences.
    """
    a = t[k, k]
    c = t[k + 1, k + 1]
    x = np.array([t[k, k + 1], c - a], dtype=complex)
    nx = np.sqrt((x.real**2 + x.imag**2).sum())
    v = x / nx
    g = np.array([[v[0], -np.conj(v[1])], [v[1], np.conj(v[0])]])
    t[k : k + 2, :] = g.conj().T @ t[k : k + 2, :]
    t[:, k : k + 2] = t[:, k : k + 2] @ g
    u[:, k : k + 2] = u[:, k : k + 2] @ g
    t[k + 1, k] = 0.0
    t[k, k] = c
    t[k + 1, k + 1] = a


def _fix_phases(t: np.ndarray, u: np.ndarray) -> None:
    """Apply the column phase convention via a diagonal unitary, compensated in T."""
    n = u.shape[0]
    idx = np.argmax(np.abs(u), axis=0)
    pivots = u[idx, np.arange(n)]
    mags = np.abs(pivots)
    d = np.where(mags > 0, np.conj(pivots) / np.where(mags > 0, mags, 1.0), 1.0)
    u *= d
    t *= d  # right-multiply by D: scales columns
    t *= np.conj(d)[:, None]  # left-multiply by D^H: scales rows


def schur_complex(a: np.ndarray, ordering: str = "by-frequency") -> ComplexSchurFactors:
    """Complex Schur decomposition A = U T U^H with an ordered diagonal.

    ordering:
        "by-frequency"    ascending distance | |lambda_max| - lambda_i |
        "by-modulus-desc" descending |lambda_i|
        "none"            keep the order the backend produced

    Reordering is done by adjacent unitary similarity swaps so T stays upper
    triangular; the reconstruction residual is verified afterwards and a
    :class:`NumericalError` is raised if the swaps degraded it.
    """
    a = _check_square(a)
    if ordering not in SCHUR_ORDERINGS:
        raise ValidationError(
            f"ordering must be one of {SCHUR_ORDERINGS}, got {ordering!r}"
        )
    t, u = scipy.linalg.schur(a.astype(complex), output="complex")
    t = np.ascontiguousarray(t)
    u = np.ascontiguousarray(u)
    if ordering != "none":
        for k in _swap_plan(np.diag(t).copy(), ordering):
            _swap_adjacent(t, u, k)
    _fix_phases(t, u)
    t[np.tril_indices_from(t, -1)] = 0.0
    norm = np.linalg.norm(a)
    residual = np.linalg.norm(u @ t @ u.conj().T - a)
    if residual > 1e-9 * max(1.0, norm):
        raise NumericalError(
            f"Schur reordering lost accuracy: residual {residual:.3e} "
            f"exceeds {1e-9 * max(1.0, norm):.3e}"
        )
    return ComplexSchurFactors(unitary=u, triangular=t, eigenvalues=np.diag(t).copy())

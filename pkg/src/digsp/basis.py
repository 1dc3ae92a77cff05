"""Graph Fourier basis container shared by the polar and Schur constructions."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ValidationError


class BasisKind(str, Enum):
    """What kind of variation the basis columns are ordered by."""

    COMMON_INLINK = "common_inlink"
    COMMON_OUTLINK = "common_outlink"
    INFLOW = "inflow"
    SCHUR = "schur"
    ADJACENCY = "adjacency"

    @property
    def complex_vectors(self) -> bool:
        return self in (BasisKind.INFLOW, BasisKind.SCHUR, BasisKind.ADJACENCY)


@dataclass(frozen=True)
class GftBasis:
    """Ordered spectral basis: column k is the k-th lowest-variation vector.

    ``frequencies`` holds the per-column variation score used for the
    ordering, ``eigenvalues`` the per-column spectral value.  Monotonicity of
    the frequencies is checked on every construction; pass ``check_sorted
    False`` only for deliberately unordered builds.
    """

    kind: BasisKind
    vectors: np.ndarray
    frequencies: np.ndarray
    eigenvalues: np.ndarray
    check_sorted: bool = field(default=True, repr=False)

    #: Slack for the monotonicity check: eigenvalue reordering skips swaps of
    #: eigenvalues closer than 1e-12, which can leave frequency inversions of
    #: at most that size between numerically tied columns.
    MONOTONE_SLACK = 1e-12

    def __post_init__(self):
        vectors = np.asarray(self.vectors)
        freqs = np.asarray(self.frequencies, dtype=float)
        eigs = np.asarray(self.eigenvalues, dtype=complex)
        n = vectors.shape[0]
        if vectors.ndim != 2 or vectors.shape[1] != n:
            raise ValidationError(f"basis vectors must be square, got {vectors.shape}")
        if freqs.shape != (n,) or eigs.shape != (n,):
            raise ValidationError("frequencies/eigenvalues must have one entry per column")
        if self.check_sorted and np.any(np.diff(freqs) < -self.MONOTONE_SLACK):
            raise ValidationError("basis frequencies must be nondecreasing")
        vectors = vectors.copy()
        freqs = freqs.copy()
        eigs = eigs.copy()
        vectors.setflags(write=False)
        freqs.setflags(write=False)
        eigs.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "eigenvalues", eigs)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def is_complex(self) -> bool:
        return self.kind.complex_vectors

    def transform(self, x: np.ndarray) -> np.ndarray:
        """Project a signal onto the basis: coefficients V^H x."""
        x = np.asarray(x).reshape(-1)
        if x.shape[0] != self.n:
            raise ValidationError(f"signal length {x.shape[0]} != basis size {self.n}")
        return self.vectors.conj().T @ x

    def synthesize(self, coefficients: np.ndarray) -> np.ndarray:
        """Inverse projection: V @ coefficients."""
        c = np.asarray(coefficients).reshape(-1)
        if c.shape[0] != self.n:
            raise ValidationError(f"got {c.shape[0]} coefficients for size {self.n}")
        return self.vectors @ c

    def relabeled(self, kind: BasisKind) -> "GftBasis":
        """Same basis under a different kind tag (e.g. Schur vectors used as
        the adjacency-ordered GFT)."""
        return GftBasis(
            kind=kind,
            vectors=self.vectors,
            frequencies=self.frequencies,
            eigenvalues=self.eigenvalues,
            check_sorted=self.check_sorted,
        )

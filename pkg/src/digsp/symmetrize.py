"""Symmetrizations of a digraph and the quadratic variation they induce.

The common-in-link matrix A @ A.T connects nodes that share in-links on the
original graph; the common-out-link matrix A.T @ A connects nodes that share
out-links; their sum is the bibliometric symmetrization.  Entry (i, j) of the
in-link matrix is sum_k a_ik * a_jk, i.e. the overlap of rows i and j.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ValidationError
from .graphs import Digraph, as_signal


class SymmetrizationKind(str, Enum):
    COMMON_IN_LINK = "common_in_link"
    COMMON_OUT_LINK = "common_out_link"
    BIBLIOMETRIC = "bibliometric"


@dataclass(frozen=True)
class Symmetrization:
    """A symmetric matrix derived from a digraph, tagged with how."""

    kind: SymmetrizationKind
    matrix: np.ndarray
    source: Digraph

    def __post_init__(self):
        m = 0.5 * (self.matrix + self.matrix.T)  # exact: float + is commutative
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def bibliographic_coupling(g: Digraph) -> Symmetrization:
    """Common-in-link symmetrization A @ A.T (PSD)."""
    a = g.adjacency
    return Symmetrization(SymmetrizationKind.COMMON_IN_LINK, a @ a.T, g)


def co_citation(g: Digraph) -> Symmetrization:
    """Common-out-link symmetrization A.T @ A (PSD)."""
    a = g.adjacency
    return Symmetrization(SymmetrizationKind.COMMON_OUT_LINK, a.T @ a, g)


def bibliometric(g: Digraph) -> Symmetrization:
    """Sum of the in-link and out-link symmetrizations."""
    a = g.adjacency
    return Symmetrization(SymmetrizationKind.BIBLIOMETRIC, a @ a.T + a.T @ a, g)


def quadratic_variation(s: Symmetrization, x) -> float:
    """Quadratic form x.T @ S @ x; large values mean the signal is smooth over
    the node pairs S connects (it is maximized by the top eigenvector)."""
    x = as_signal(x, s.n)
    return float(x @ s.matrix @ x)


def connected_components(matrix: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Component label per node of the undirected support graph of ``matrix``.

    Union-find over entries with |value| > tol; off-diagonal entries only.
    Labels are 0-based and increase with the smallest node index in the
    component.
    """
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError("connectivity needs a square matrix")
    n = m.shape[0]
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    rows, cols = np.nonzero(np.abs(m) > tol)
    for i, j in zip(rows, cols):
        if i == j:
            continue
        ri, rj = find(int(i)), find(int(j))
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    labels = np.empty(n, dtype=int)
    next_label = 0
    seen: dict[int, int] = {}
    for i in range(n):
        root = find(i)
        if root not in seen:
            seen[root] = next_label
            next_label += 1
        labels[i] = seen[root]
    return labels


def is_connected(matrix: np.ndarray, tol: float = 1e-12) -> bool:
    return int(connected_components(matrix, tol).max()) == 0

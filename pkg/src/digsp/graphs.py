"""Digraph value type, graph-family generators, and signal helpers.

Adjacency convention: ``adjacency[i, j]`` is the weight of the edge from node
``j`` to node ``i``, so a matrix-vector product propagates values along edge
directions.  Signals are plain 1-D float arrays validated at API boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class Digraph:
    """Dense weighted digraph; immutable after construction."""

    adjacency: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.adjacency, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError(f"adjacency must be square, got shape {a.shape}")
        if a.shape[0] < 1:
            raise ValidationError("graph needs at least one node")
        if not np.all(np.isfinite(a)):
            raise ValidationError("adjacency contains non-finite weights")
        if a.min(initial=0.0) < 0.0:
            raise ValidationError("edge weights must be nonnegative")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "adjacency", a)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.adjacency))


@dataclass(frozen=True)
class MBlockSpec:
    """Parameters of a balanced block-cyclic graph: ``blocks`` node groups of
    equal size, every node feeding every node of the next group."""

    blocks: int
    nodes_per_block: int
    weight_seed: int = 0
    normalize: bool = False

    def __post_init__(self):
        if self.blocks < 2:
            raise ValidationError("need at least 2 blocks")
        if self.nodes_per_block < 1:
            raise ValidationError("need at least 1 node per block")

    @property
    def n(self) -> int:
        return self.blocks * self.nodes_per_block

    def block_indices(self, b: int) -> np.ndarray:
        m = self.nodes_per_block
        return np.arange(b * m, (b + 1) * m)


def as_signal(values, n: int) -> np.ndarray:
    """Validate and return a graph signal as a length-n float array."""
    x = np.asarray(values, dtype=float).reshape(-1)
    if x.shape[0] != n:
        raise ValidationError(f"signal length {x.shape[0]} != node count {n}")
    if not np.all(np.isfinite(x)):
        raise ValidationError("signal contains non-finite entries")
    return x


def gen_directed_cycle(n: int) -> Digraph:
    """Cycle 0 -> 1 -> ... -> n-1 -> 0 with unit weights (a permutation matrix)."""
    if n < 2:
        raise ValidationError("cycle needs n >= 2")
    a = np.zeros((n, n))
    a[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    return Digraph(a)


def gen_directed_path(n: int) -> Digraph:
    """Path 0 -> 1 -> ... -> n-1; the adjacency is nilpotent (A**n == 0)."""
    if n < 2:
        raise ValidationError("path needs n >= 2")
    a = np.zeros((n, n))
    a[np.arange(1, n), np.arange(n - 1)] = 1.0
    return Digraph(a)


def gen_directed_torus(rows: int, cols: int) -> Digraph:
    """Directed torus grid: each node points to its right and down neighbor
    with wrap-around.  The adjacency is normal (commutes with its transpose)."""
    if rows < 2 or cols < 2:
        raise ValidationError("torus needs rows, cols >= 2")
    right = gen_directed_cycle(cols).adjacency
    down = gen_directed_cycle(rows).adjacency
    a = np.kron(np.eye(rows), right) + np.kron(down, np.eye(cols))
    return Digraph(a)


def gen_mblock_cyclic(spec: MBlockSpec) -> Digraph:
    """Balanced block-cyclic graph: block b feeds block b+1 (mod M) densely
    with uniform(0.5, 1.5) weights; zero edges inside blocks.

    With ``spec.normalize`` each row is divided by its row sum, so a step of
    the graph replaces every node value by a weighted average of its
    in-neighbors.
    """
    rng = np.random.default_rng(spec.weight_seed)
    m = spec.nodes_per_block
    a = np.zeros((spec.n, spec.n))
    for b in range(spec.blocks):
        rows = spec.block_indices((b + 1) % spec.blocks)
        cols = spec.block_indices(b)
        a[np.ix_(rows, cols)] = rng.uniform(0.5, 1.5, size=(m, m))
    if spec.normalize:
        a /= a.sum(axis=1, keepdims=True)
    return Digraph(a)


def gen_random_digraph(n: int, density: float = 0.3, seed: int = 0) -> Digraph:
    """Random digraph: each off-diagonal edge present with probability
    ``density``, weights uniform(0.5, 1.5).  No self-loops."""
    if n < 1:
        raise ValidationError("graph needs n >= 1")
    if not 0.0 <= density <= 1.0:
        raise ValidationError("density must be in [0, 1]")
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < density
    weights = rng.uniform(0.5, 1.5, size=(n, n))
    a = np.where(mask, weights, 0.0)
    np.fill_diagonal(a, 0.0)
    return Digraph(a)


def random_signal(n: int, seed: int = 0, distribution: str = "normal") -> np.ndarray:
    """Reproducible random signal; "normal" is iid N(0, 1), "uniform" is U[-1, 1)."""
    if n < 1:
        raise ValidationError("signal needs n >= 1")
    rng = np.random.default_rng(seed)
    if distribution == "normal":
        return rng.standard_normal(n)
    if distribution == "uniform":
        return rng.uniform(-1.0, 1.0, size=n)
    raise ValidationError(f"unknown distribution {distribution!r}")

import numpy as np
import numpy.testing as npt
import pytest

from digsp.errors import ValidationError
from digsp.graphs import (
    Digraph,
    MBlockSpec,
    as_signal,
    gen_directed_cycle,
    gen_directed_path,
    gen_directed_torus,
    gen_mblock_cyclic,
    gen_random_digraph,
    random_signal,
)

from conftest import assert_multiset_close


class TestDigraph:
    def test_validation(self):
        with pytest.raises(ValidationError):
            Digraph(np.ones((2, 3)))
        with pytest.raises(ValidationError):
            Digraph(np.array([[0.0, -1.0], [0.0, 0.0]]))
        with pytest.raises(ValidationError):
            Digraph(np.array([[np.inf]]))

    def test_immutable(self):
        g = gen_directed_cycle(3)
        with pytest.raises(ValueError):
            g.adjacency[0, 0] = 5.0

    def test_counts(self):
        g = gen_directed_cycle(5)
        assert g.n == 5
        assert g.nnz == 5


class TestCycle:
    def test_three_nodes(self):
        a = gen_directed_cycle(3).adjacency
        # edge i -> i+1 mod n: entries (1,0), (2,1), (0,2)
        expected = np.zeros((3, 3))
        expected[1, 0] = expected[2, 1] = expected[0, 2] = 1.0
        npt.assert_array_equal(a, expected)

    def test_two_nodes_swap(self):
        npt.assert_array_equal(
            gen_directed_cycle(2).adjacency, np.array([[0.0, 1.0], [1.0, 0.0]])
        )

    def test_orthogonal(self):
        a = gen_directed_cycle(8).adjacency
        npt.assert_array_equal(a @ a.T, np.eye(8))

    def test_too_small(self):
        with pytest.raises(ValidationError):
            gen_directed_cycle(1)


class TestPath:
    def test_two_nodes(self):
        npt.assert_array_equal(
            gen_directed_path(2).adjacency, np.array([[0.0, 0.0], [1.0, 0.0]])
        )

    def test_nilpotent_exactly(self):
        a = gen_directed_path(4).adjacency
        npt.assert_array_equal(np.linalg.matrix_power(a, 4), np.zeros((4, 4)))

    def test_defective(self):
        # geometric multiplicity of eigenvalue 0 is n - rank = 1 < 4
        a = gen_directed_path(4).adjacency
        assert np.linalg.matrix_rank(a) == 3


class TestTorus:
    def test_out_degree(self):
        a = gen_directed_torus(2, 2).adjacency
        npt.assert_array_equal(a.sum(axis=0), np.full(4, 2.0))

    def test_normality(self):
        a = gen_directed_torus(10, 10).adjacency
        assert a.shape == (100, 100)
        assert np.abs(a @ a.T - a.T @ a).max() <= 1e-12

    def test_circulant_eigenvalues(self):
        a = gen_directed_torus(3, 3).adjacency
        w = np.exp(2j * np.pi * np.arange(3) / 3)
        expected = (w[:, None] + w[None, :]).reshape(-1)
        assert_multiset_close(np.linalg.eigvals(a), expected, tol=1e-8)

    def test_too_small(self):
        with pytest.raises(ValidationError):
            gen_directed_torus(1, 5)


class TestMBlockCyclic:
    def test_within_block_zero(self):
        spec = MBlockSpec(blocks=4, nodes_per_block=25, weight_seed=7)
        a = gen_mblock_cyclic(spec).adjacency
        for b in range(4):
            idx = spec.block_indices(b)
            npt.assert_array_equal(a[np.ix_(idx, idx)], np.zeros((25, 25)))

    def test_two_blocks_of_one_is_weighted_cycle(self):
        a = gen_mblock_cyclic(MBlockSpec(blocks=2, nodes_per_block=1)).adjacency
        assert a[0, 0] == a[1, 1] == 0.0
        assert a[0, 1] > 0 and a[1, 0] > 0

    def test_normalized_rows_sum_to_one(self):
        spec = MBlockSpec(blocks=3, nodes_per_block=5, weight_seed=1, normalize=True)
        a = gen_mblock_cyclic(spec).adjacency
        npt.assert_allclose(a.sum(axis=1), np.ones(15), atol=1e-12)

    def test_block_cyclic_closure(self):
        spec = MBlockSpec(blocks=4, nodes_per_block=5, weight_seed=3)
        a = gen_mblock_cyclic(spec).adjacency
        power = np.linalg.matrix_power(a, 4)
        for b1 in range(4):
            for b2 in range(4):
                if b1 == b2:
                    continue
                block = power[np.ix_(spec.block_indices(b1), spec.block_indices(b2))]
                npt.assert_array_equal(block, np.zeros((5, 5)))

    def test_weight_range_and_determinism(self):
        spec = MBlockSpec(blocks=3, nodes_per_block=4, weight_seed=11)
        a = gen_mblock_cyclic(spec).adjacency
        w = a[a > 0]
        assert w.min() >= 0.5 and w.max() <= 1.5
        b = gen_mblock_cyclic(spec).adjacency
        assert a.tobytes() == b.tobytes()

    def test_spec_validation(self):
        with pytest.raises(ValidationError):
            MBlockSpec(blocks=1, nodes_per_block=5)
        with pytest.raises(ValidationError):
            MBlockSpec(blocks=2, nodes_per_block=0)


class TestRandomDigraph:
    def test_deterministic(self):
        a = gen_random_digraph(12, density=0.4, seed=5).adjacency
        b = gen_random_digraph(12, density=0.4, seed=5).adjacency
        assert a.tobytes() == b.tobytes()
        assert gen_random_digraph(12, density=0.4, seed=6).adjacency.tobytes() != a.tobytes()

    def test_no_self_loops_and_weights(self):
        a = gen_random_digraph(20, density=0.5, seed=0).adjacency
        npt.assert_array_equal(np.diag(a), np.zeros(20))
        w = a[a > 0]
        assert w.min() >= 0.5 and w.max() <= 1.5

    def test_density_bounds(self):
        with pytest.raises(ValidationError):
            gen_random_digraph(5, density=1.5)


class TestRandomSignal:
    def test_reproducible(self):
        x = random_signal(50, seed=9)
        npt.assert_array_equal(x, random_signal(50, seed=9))

    def test_moments(self):
        x = random_signal(100_000, seed=13)
        assert abs(x.mean()) <= 0.02
        assert abs(x.var() - 1.0) <= 0.05

    def test_uniform(self):
        x = random_signal(1000, seed=2, distribution="uniform")
        assert x.min() >= -1.0 and x.max() < 1.0

    def test_unknown_distribution(self):
        with pytest.raises(ValidationError):
            random_signal(5, seed=0, distribution="cauchy")


class TestAsSignal:
    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            as_signal([1.0, 2.0], 3)

    def test_non_finite(self):
        with pytest.raises(ValidationError):
            as_signal([1.0, np.nan, 0.0], 3)

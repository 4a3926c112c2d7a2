# tests/test_bp.py
"""Test suite for belief propagation and the Bethe estimate."""

import math

import numpy as np
import pytest

from c3rf.core.errors import AllConfigurationsForbidden, DimensionMismatch
from c3rf.core.types import BPSettings
from c3rf.inference.bp import BeliefPropagator, bethe_log_z, map_maxproduct, sum_product
from c3rf.inference.exact import exact_log_z, exact_marginals, map_exhaustive
from c3rf.utils.numeric import log_to_probabilities

from data.generators import DataGenerator
from utils import assert_node_marginals_close


def random_tree_case(seed: int):
    """Tree with at most 12 variables and up to 4 labels, enumerable."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 13))
    cards = rng.integers(2, 5, size=n)
    while np.prod(cards.astype(float)) > 2 ** 16:
        cards[int(np.argmax(cards))] -= 1
    T = float(rng.choice([0.5, 1.0, 2.0]))
    return DataGenerator.random_tree(n, cards.tolist(), seed, temperature=T)


class TestSumProduct:

    def test_softmax(self):
        model = DataGenerator.unary_model([[0.0, math.log(3)]])
        m = sum_product(model)
        np.testing.assert_allclose(m.node[0], [0.25, 0.75], atol=1e-12)
        assert m.converged

    def test_independent_uniform(self):
        m = sum_product(DataGenerator.zero_model(2))
        for vec in m.node:
            np.testing.assert_allclose(vec, [0.5, 0.5], atol=1e-15)

    def test_chain_matches_enumeration(self):
        model = DataGenerator.random_chain(3, 2, seed=4)
        assert_node_marginals_close(sum_product(model).node, exact_marginals(model).node, 1e-9)

    def test_round_robin_sweep_reaches_chain_end(self):
        model = DataGenerator.random_chain(6, 2, seed=8)
        bp = BeliefPropagator(model)
        bp.sweep()
        last = log_to_probabilities(bp.node_log_belief(5))
        np.testing.assert_allclose(last, exact_marginals(model).node[5], atol=1e-12)

    def test_forest_is_undamped(self, chain_model, grid2):
        assert BeliefPropagator(chain_model).damping == 0.0
        assert BeliefPropagator(grid2).damping > 0.0
        assert BeliefPropagator(grid2, BPSettings(damping=0.0)).damping == 0.0

    def test_non_convergence_is_reported(self, grid3):
        m = sum_product(grid3, BPSettings(max_iterations=1))
        assert not m.converged
        assert m.iterations == 1

    def test_all_forbidden(self):
        model = DataGenerator.unary_model([[-np.inf, -np.inf]])
        with pytest.raises(AllConfigurationsForbidden):
            sum_product(model)

    def test_hard_zeros_propagate(self):
        model = DataGenerator.unary_model([[0.0, -np.inf], [0.0, 0.0]])
        m = sum_product(model)
        np.testing.assert_array_equal(m.node[0], [1.0, 0.0])


class TestBetheLogZ:

    def test_independent_uniform(self):
        model = DataGenerator.zero_model(2)
        assert bethe_log_z(model, sum_product(model)) == pytest.approx(math.log(4), abs=1e-12)

    def test_trees_are_exact(self):
        for seed in range(50):
            model = random_tree_case(seed)
            m = sum_product(model)
            assert abs(bethe_log_z(model, m) - exact_log_z(model)) < 1e-9, seed
            assert_node_marginals_close(m.node, exact_marginals(model).node, 1e-9)

    def test_loopy_grid_is_close(self, grid3):
        estimate = bethe_log_z(grid3, sum_product(grid3))
        assert np.isfinite(estimate)
        assert abs(estimate - exact_log_z(grid3)) < 0.5

    def test_foreign_marginals(self, grid2, chain_model):
        with pytest.raises(DimensionMismatch):
            bethe_log_z(grid2, sum_product(chain_model))


class TestMapMaxProduct:

    def test_trees_match_exhaustive(self):
        for seed in range(20):
            model = random_tree_case(seed)
            np.testing.assert_array_equal(map_maxproduct(model), map_exhaustive(model))

    def test_unary_argmax(self):
        tables = [[0.0, -1.0, -2.0], [-3.0, -1.0, -2.0]]
        assert map_maxproduct(DataGenerator.unary_model(tables)).tolist() == [0, 1]

    def test_loopy_returns_configuration(self, grid3):
        y = map_maxproduct(grid3)
        assert y.shape == (9,)
        assert set(y.tolist()) <= {0, 1}

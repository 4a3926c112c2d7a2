# tests/test_exact.py
"""Test suite for the enumeration oracles."""

import math

import numpy as np
import pytest

from c3rf.core.errors import AllConfigurationsForbidden, TooLargeToEnumerate
from c3rf.core.graph import gen_grid, score_batch
from c3rf.inference.exact import (
    elimination_log_z,
    enumerate_configurations,
    exact_log_z,
    exact_marginals,
    map_exhaustive,
    sample_exact,
)

from data.generators import DataGenerator


class TestExactLogZ:

    def test_uniform_binary(self):
        model = DataGenerator.unary_model([[0.0, 0.0]])
        assert exact_log_z(model) == pytest.approx(math.log(2), abs=1e-15)

    def test_single_live_configuration(self):
        model = DataGenerator.unary_model([[0.0, -np.inf]])
        assert exact_log_z(model) == 0.0

    def test_chain(self, chain_model):
        expected = math.log(2 * math.exp(0) + 2 * math.exp(-1))
        assert exact_log_z(chain_model) == pytest.approx(expected, abs=1e-12)

    def test_temperature(self, chain_model):
        expected = math.log(2 + 2 * math.exp(-0.5))
        assert exact_log_z(chain_model.with_temperature(2.0)) == pytest.approx(expected, abs=1e-12)

    def test_cap(self):
        with pytest.raises(TooLargeToEnumerate):
            exact_log_z(gen_grid(3, seed=0), cap=100)

    def test_elimination_matches_enumeration(self, grid3):
        assert elimination_log_z(grid3) == pytest.approx(exact_log_z(grid3), abs=1e-9)
        model = gen_grid(3, seed=2, num_labels=3).with_temperature(0.5)
        assert elimination_log_z(model) == pytest.approx(exact_log_z(model), abs=1e-9)


class TestExactMarginals:

    def test_softmax(self):
        model = DataGenerator.unary_model([[0.0, math.log(3)]])
        np.testing.assert_allclose(exact_marginals(model).node[0], [0.25, 0.75], atol=1e-12)

    def test_independent_uniform(self):
        marginals = exact_marginals(DataGenerator.zero_model(2))
        for vec in marginals.node:
            np.testing.assert_allclose(vec, [0.5, 0.5], atol=1e-15)

    def test_grid_against_weights(self, grid2):
        Y = enumerate_configurations(grid2.graph)
        w = np.exp(score_batch(grid2, Y))
        p = w / w.sum()
        marginals = exact_marginals(grid2)
        for v in range(4):
            expected = [p[Y[:, v] == k].sum() for k in range(2)]
            np.testing.assert_allclose(marginals.node[v], expected, atol=1e-12)
        for f, factor in enumerate(grid2.graph.factors):
            assert marginals.factor[f].shape == grid2.graph.shaped_tables[f].shape
            assert marginals.factor[f].sum() == pytest.approx(1.0)

    def test_all_forbidden(self):
        model = DataGenerator.unary_model([[-np.inf, -np.inf]])
        with pytest.raises(AllConfigurationsForbidden):
            exact_marginals(model)


class TestMapExhaustive:

    def test_unary(self):
        assert map_exhaustive(DataGenerator.unary_model([[0.0, -1.0]])).tolist() == [0]

    def test_lexicographic_tie_break(self):
        assert map_exhaustive(DataGenerator.zero_model(2)).tolist() == [0, 0]

    def test_grid(self, grid3):
        Y = enumerate_configurations(grid3.graph)
        scores = score_batch(grid3, Y)
        y = map_exhaustive(grid3)
        assert score_batch(grid3, y)[0] == scores.max()


class TestSampleExact:

    def test_deterministic(self, grid2):
        a = sample_exact(grid2, 50, seed=5)
        b = sample_exact(grid2, 50, seed=5)
        assert a.shape == (50, 4)
        np.testing.assert_array_equal(a, b)

    def test_respects_forbidden(self):
        model = DataGenerator.unary_model([[0.0, -np.inf], [0.0, 0.0]])
        samples = sample_exact(model, 200, seed=0)
        assert np.all(samples[:, 0] == 0)

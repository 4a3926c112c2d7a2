# tests/test_predict.py
"""Test suite for candidate-restricted predictors."""

import itertools

import numpy as np
import pytest

from c3rf.candidates import CandidateSet, divmbest
from c3rf.core.dtypes import InferenceMethod, LossName, PredictorKind
from c3rf.core.errors import DimensionMismatch, EmptyCandidateSet
from c3rf.core.graph import gen_grid, score
from c3rf.core.types import LossKind, Marginals, PredictorConfig
from c3rf.hamming.ball import HammingBall
from c3rf.inference.exact import enumerate_configurations, exact_marginals, log_weights
from c3rf.inference.strategy import BeliefPropagationStrategy, ExactStrategy
from c3rf.loss import loss_matrix
from c3rf.predict import (
    c3rf_fela_predict,
    c3rf_marginals,
    crf_fela_predict,
    delta_predict,
    log_prob_objective,
    loss_kind,
    map_predict,
    mass_predict,
    predict,
)

from data.generators import DataGenerator
from utils import assert_node_marginals_close

HAMMING = LossKind(LossName.HAMMING)
IOU2 = LossKind(LossName.IOU, 2)


def config(kind, rho=0.0, T=1.0, loss=HAMMING):
    return PredictorConfig(PredictorKind(kind), rho, T, loss)


class TestSimplePredictors:

    def test_single_candidate(self, grid2):
        cands = DataGenerator.candidate_set(grid2, [[0, 1, 1, 0]])
        for kind in PredictorKind:
            result = predict(grid2, cands, config(kind, 0.25))
            assert result.chosen_index == 0
            np.testing.assert_array_equal(result.chosen, [0, 1, 1, 0])

    def test_map_is_first(self, grid2):
        cands = divmbest(grid2, 4, 0.5)
        result = map_predict(grid2, cands)
        assert result.chosen_index == 0
        assert result.kind == PredictorKind.MAP

    def test_delta_weighted_vote(self):
        model = DataGenerator.zero_model(1)
        cands = DataGenerator.candidate_set(model, [[0], [1]], [0.7, 0.3])
        result = delta_predict(model, cands, HAMMING)
        np.testing.assert_allclose(result.objective_values, [0.3, 0.7])
        assert result.chosen_index == 0

    def test_objective_is_expected_loss(self):
        model = DataGenerator.zero_model(2)
        cands = DataGenerator.candidate_set(model, [[0, 0], [1, 1], [0, 1]], [1.0, 3.0, 4.0])
        result = delta_predict(model, cands, HAMMING)
        # candidate probabilities 1/8, 3/8, 1/2
        np.testing.assert_allclose(result.objective_values, [0.625, 0.375, 0.25])
        for kind in ("mass", "c3rf_fela"):
            other = predict(model, cands, config(kind, 0.0))
            np.testing.assert_allclose(other.objective_values, result.objective_values, rtol=1e-12)

    def test_delta_brute_force(self):
        model = gen_grid(2, seed=5, temperature=2.0)
        configs = [list(y) for y in itertools.product(range(2), repeat=4)][::3]
        cands = DataGenerator.candidate_set(model, configs)
        result = delta_predict(model, cands, HAMMING)
        scores = np.array([score(model, y) for y in configs]) / 2.0
        w = np.exp(scores - scores.max())
        w /= w.sum()
        expected = [
            sum(w[c] * np.mean(np.array(configs[c]) != np.array(configs[j])) for c in range(len(configs)))
            for j in range(len(configs))
        ]
        np.testing.assert_allclose(result.objective_values, expected, rtol=1e-12)
        assert result.chosen_index == int(np.argmin(expected))

    def test_ties_go_to_first(self):
        model = DataGenerator.zero_model(3)
        cands = DataGenerator.candidate_set(model, [[0, 0, 0], [1, 1, 1]])
        assert delta_predict(model, cands, HAMMING).chosen_index == 0
        result = c3rf_fela_predict(model, cands, 1, HAMMING, ExactStrategy())
        assert result.objective_values[0] == result.objective_values[1]
        assert result.chosen_index == 0

    def test_empty_candidate_set(self, grid2):
        empty = CandidateSet([])
        for kind in PredictorKind:
            with pytest.raises(EmptyCandidateSet):
                predict(grid2, empty, config(kind, 0.25))


class TestCollapse:

    @pytest.mark.parametrize("loss", [HAMMING, IOU2])
    def test_zero_radius_matches_delta(self, loss):
        for seed in range(100):
            model = gen_grid(2, seed=seed)
            cands = DataGenerator.random_candidates(model, 3 + 2 * (seed % 2), seed)
            delta = predict(model, cands, config("delta", loss=loss))
            for kind in ("c3rf_fela", "mass"):
                other = predict(model, cands, config(kind, 0.0, loss=loss))
                assert other.chosen_index == delta.chosen_index
                np.testing.assert_allclose(other.objective_values, delta.objective_values, rtol=1e-12)

    def test_mass_at_zero_radius_uses_scores(self, grid2):
        cands = DataGenerator.random_candidates(grid2, 4, 1)
        result = mass_predict(grid2, cands, 0, HAMMING, BeliefPropagationStrategy())
        np.testing.assert_array_equal(result.log_masses, cands.scores)

    def test_full_radius_matches_crf_fela(self):
        for seed in range(50):
            model = gen_grid(2, seed=100 + seed)
            cands = DataGenerator.random_candidates(model, 4, seed)
            full = c3rf_fela_predict(model, cands, model.num_variables, HAMMING, ExactStrategy())
            crf = crf_fela_predict(model, cands, HAMMING, ExactStrategy())
            np.testing.assert_allclose(full.objective_values, crf.objective_values, atol=1e-12)
            assert full.chosen_index == crf.chosen_index

    def test_full_radius_mixture_is_exact(self, grid2):
        cands = DataGenerator.random_candidates(grid2, 3, 2)
        mixture = c3rf_marginals(grid2, cands, grid2.num_variables, ExactStrategy())
        assert_node_marginals_close(mixture.node, exact_marginals(grid2).node, atol=1e-12)


class TestInvariance:

    def test_constant_shift(self):
        rng = np.random.default_rng(4)
        tables = rng.uniform(-3.0, 0.0, size=(4, 2))
        model = DataGenerator.unary_model(tables.tolist())
        shifted = DataGenerator.unary_model((tables + 3.0).tolist())
        configs = [[0, 0, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]]
        for kind in ("delta", "c3rf_fela", "mass"):
            a = predict(model, DataGenerator.candidate_set(model, configs), config(kind, 0.25),
                        method=InferenceMethod.BETHE)
            b = predict(shifted, DataGenerator.candidate_set(shifted, configs), config(kind, 0.25),
                        method=InferenceMethod.BETHE)
            assert a.chosen_index == b.chosen_index
            np.testing.assert_allclose(a.objective_values, b.objective_values, rtol=1e-9)

    def test_workers_do_not_change_result(self, grid3):
        cands = divmbest(grid3, 5, 0.5)
        cfg = config("c3rf_fela", 0.25)
        serial = predict(grid3, cands, cfg, method=InferenceMethod.BETHE, workers=1)
        pooled = predict(grid3, cands, cfg, method=InferenceMethod.BETHE, workers=4)
        np.testing.assert_array_equal(serial.objective_values, pooled.objective_values)
        np.testing.assert_array_equal(serial.log_masses, pooled.log_masses)


class TestMarginalsObjective:

    def test_zero_radius_mixture(self):
        model = DataGenerator.zero_model(2)
        cands = DataGenerator.candidate_set(model, [[0, 0], [1, 1]])
        mixture = c3rf_marginals(model, cands, 0)
        assert_node_marginals_close(mixture.node, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)
        assert log_prob_objective(mixture, [0, 1], 2) == pytest.approx({0: np.log(0.5), 1: np.log(0.5)})

    def test_point_mass_log_prob(self):
        marginals = Marginals(node=[np.array([1.0, 0.0]), np.array([1.0, 0.0])])
        out = log_prob_objective(marginals, [0, 1], 2)
        assert out[0] == 0.0
        assert out[1] == -np.inf

    def test_absent_class_skipped(self):
        marginals = Marginals(node=[np.array([0.5, 0.5, 0.0])])
        assert set(log_prob_objective(marginals, [1], 3)) == {1}

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            log_prob_objective(Marginals(node=[np.array([0.5, 0.5])]), [0, 1], 2)


class TestPrediction:

    def test_to_dict(self, grid2):
        cands = divmbest(grid2, 3, 0.5)
        out = predict(grid2, cands, config("c3rf_fela", 0.25)).to_dict()
        assert out["kind"] == PredictorKind.C3RF_FELA
        assert set(out["diagnostics"]) == {"log_masses", "converged"}
        assert len(out["objective_values"]) == 3

    def test_loss_kind(self):
        assert loss_kind("iou", 3) == LossKind(LossName.IOU, 3)
        assert loss_kind("hamming") == HAMMING
        with pytest.raises(ValueError):
            loss_kind("iou", 1)

    def test_loss_matrix_is_symmetric(self, grid2):
        cands = divmbest(grid2, 4, 0.5)
        L = loss_matrix(IOU2, list(cands.configurations))
        np.testing.assert_array_equal(L, L.T)


class TestBallConstantLoss:

    def test_mass_objective_is_ball_constant_expected_loss(self):
        for seed in range(20):
            model = DataGenerator.random_chain(6, 2, seed=seed)
            cands = DataGenerator.random_candidates(model, 4, seed)
            result = mass_predict(model, cands, 2, HAMMING, ExactStrategy())
            Y = enumerate_configurations(model.graph)
            lw = log_weights(model)
            shift = result.log_masses.max()
            L = loss_matrix(HAMMING, list(cands.configurations))
            masses = np.array([
                np.exp(lw[HammingBall(cand.configuration, 2).contains(Y)] - shift).sum()
                for cand in cands
            ])
            expected = (masses / masses.sum()) @ L
            np.testing.assert_allclose(result.objective_values, expected, rtol=1e-12)
            assert result.objective_values.max() <= 1.0 + 1e-12

# tests/test_candidates.py
"""Test suite for DivMBest and candidate-set curation."""

import logging

import numpy as np
import pytest

from c3rf.candidates import Candidate, CandidateSet, diversity_augmented, divmbest, first_unique
from c3rf.core.dtypes import SolverName
from c3rf.core.errors import EmptyCandidateSet
from c3rf.core.graph import gen_grid, score, score_batch
from c3rf.inference.exact import enumerate_configurations, map_exhaustive

from data.generators import DataGenerator


def brute_force_divmbest_ok(model, cands, lam):
    """Every candidate maximizes its augmented objective, lexicographic ties included."""
    Y = enumerate_configurations(model.graph)
    base = score_batch(model, Y)
    for m, cand in enumerate(cands):
        bonus = sum(lam * np.sum(Y != prev.configuration[None, :], axis=1) for prev in cands.items[:m])
        objective = base + bonus
        if not np.array_equal(Y[int(np.argmax(objective))], cand.configuration):
            return False
    return True


class TestDivMBest:

    def test_lambda_zero_repeats_map(self, grid3):
        cands = divmbest(grid3, 4, 0.0)
        assert len(cands) == 4
        for cand in cands:
            np.testing.assert_array_equal(cand.configuration, map_exhaustive(grid3))

    def test_single_variable(self):
        model = DataGenerator.unary_model([[0.0, -1.0]])
        cands = divmbest(model, 2, 2.0)
        assert [c.configuration.tolist() for c in cands] == [[0], [1]]
        assert cands.scores.tolist() == [0.0, -1.0]

    def test_grid_exhaustive(self, grid2):
        cands = divmbest(grid2, 3, 1.0, SolverName.EXHAUSTIVE)
        assert cands.solver == SolverName.EXHAUSTIVE
        assert not cands.heuristic_map
        assert brute_force_divmbest_ok(grid2, cands, 1.0)

    def test_exhaustive_optimality(self):
        for seed in range(100):
            rng = np.random.default_rng(seed)
            if seed % 2:
                model = gen_grid(int(rng.integers(1, 4)), seed)
            else:
                model = DataGenerator.random_chain(int(rng.integers(2, 11)), 2, seed)
            lam = float(rng.choice([0.1, 0.5, 1.0, 2.0]))
            cands = divmbest(model, 3, lam, SolverName.EXHAUSTIVE)
            assert brute_force_divmbest_ok(model, cands, lam), seed

    def test_recorded_scores_are_unaugmented(self, grid2):
        for cand in divmbest(grid2, 3, 0.5):
            assert cand.score == score(grid2, cand.configuration)

    def test_maxproduct_marks_heuristic(self, grid2):
        cands = divmbest(grid2, 2, 0.5, SolverName.MAXPRODUCT)
        assert cands.heuristic_map
        assert len(cands) == 2

    def test_auto_solver(self, grid2):
        assert divmbest(grid2, 1, 0.5).solver == SolverName.EXHAUSTIVE
        assert divmbest(grid2, 1, 0.5, cap=4).solver == SolverName.MAXPRODUCT

    def test_diversity_augmented(self):
        model = DataGenerator.zero_model(2)
        augmented = diversity_augmented(model, [np.array([0, 0]), np.array([0, 1])], 0.5)
        assert score(augmented, [1, 1]) == pytest.approx(0.5 * 2 + 0.5 * 1)

    def test_invalid_arguments(self, grid2):
        with pytest.raises(ValueError):
            divmbest(grid2, 0, 0.5)
        with pytest.raises(ValueError):
            divmbest(grid2, 2, -1.0)


class TestCandidateSet:

    def make(self, *labels, weights=None):
        weights = weights or [1.0] * len(labels)
        return CandidateSet([Candidate(np.array(y), 0.0, w) for y, w in zip(labels, weights)])

    def test_weight_must_be_positive(self):
        with pytest.raises(ValueError):
            Candidate(np.array([0]), 0.0, 0.0)

    def test_require_nonempty(self):
        with pytest.raises(EmptyCandidateSet):
            CandidateSet().require_nonempty()

    def test_truncate(self, grid3):
        cands = divmbest(grid3, 5, 0.5)
        prefix = cands.truncate(2)
        assert len(prefix) == 2
        assert prefix.lam == cands.lam
        np.testing.assert_array_equal(prefix.configurations, cands.configurations[:2])

    def test_verify_replaces_wrong_scores(self, chain_model, caplog):
        cands = CandidateSet([Candidate(np.array([0, 1]), 5.0)])
        with caplog.at_level(logging.WARNING, logger="c3rf.candidates"):
            checked = cands.verify(chain_model)
        assert checked.scores.tolist() == [-1.0]
        assert "differs from model score" in caplog.text

    def test_first_unique_identity(self):
        cands = self.make([0], [1], [2])
        assert [c.configuration.tolist() for c in first_unique(cands, 3)] == [[0], [1], [2]]

    def test_first_unique_dedupes(self):
        out = first_unique(self.make([0], [0], [1]), 2)
        assert [c.configuration.tolist() for c in out] == [[0], [1]]
        assert out.weights.tolist() == [1.0, 1.0]

    def test_first_unique_folds_weights(self):
        out = first_unique(self.make([0], [0], [0]), 2)
        assert len(out) == 1
        assert out.weights.sum() == 3.0

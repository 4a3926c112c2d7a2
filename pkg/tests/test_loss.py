# tests/test_loss.py
"""Test suite for losses and factorized expected-loss approximations."""

import itertools
import math

import numpy as np
import pytest

from c3rf.core.dtypes import LossName
from c3rf.core.errors import DimensionMismatch, LengthMismatch
from c3rf.core.types import LossKind, Marginals
from c3rf.hamming.ball import HammingBall
from c3rf.inference.exact import exact_marginals
from c3rf.loss import (
    corpus_iou,
    expected_loss_exact,
    fela,
    fela_hamming,
    fela_iou,
    hamming_loss,
    iou_loss,
    loss_matrix,
    loss_value,
)

from data.generators import DataGenerator

HAMMING = LossKind(LossName.HAMMING)
IOU2 = LossKind(LossName.IOU, 2)


def point_mass(y, K):
    return Marginals(node=[np.eye(K)[k] for k in y])


class TestLosses:

    def test_hamming(self):
        assert hamming_loss([0, 1, 1], [0, 1, 1]) == 0.0
        assert hamming_loss([0, 0, 0, 0], [1, 1, 1, 1]) == 1.0
        assert hamming_loss([0, 1, 0, 1], [0, 1, 1, 1]) == 0.25
        with pytest.raises(LengthMismatch):
            hamming_loss([0, 1], [0])

    def test_iou(self):
        assert iou_loss([0, 1, 1], [0, 1, 1], 2) == 0.0
        assert iou_loss([1, 1, 0, 0], [1, 0, 0, 0], 2) == pytest.approx(1 - 7 / 12, abs=1e-15)
        assert iou_loss([1, 0], [0, 1], 2) == 1.0

    def test_iou_skips_absent_classes(self):
        # class 2 appears in neither configuration
        assert iou_loss([0, 1], [0, 1], 3) == 0.0
        assert iou_loss([0, 0], [0, 1], 3) == pytest.approx(1 - (0.5 + 0.0) / 2)

    def test_iou_label_range(self):
        with pytest.raises(DimensionMismatch):
            iou_loss([0, 3], [0, 1], 2)

    def test_loss_value_dispatch(self):
        assert loss_value(HAMMING, [1, 1, 0, 0], [1, 0, 0, 0]) == 0.25
        assert loss_value(IOU2, [1, 1, 0, 0], [1, 0, 0, 0]) == pytest.approx(5 / 12)

    def test_loss_matrix(self):
        configs = [np.array([0, 0]), np.array([0, 1]), np.array([1, 1])]
        L = loss_matrix(HAMMING, configs)
        np.testing.assert_array_equal(L, [[0, 0.5, 1], [0.5, 0, 0.5], [1, 0.5, 0]])

    def test_corpus_iou(self):
        pairs = [([0, 1], [0, 1]), ([1, 1], [1, 0])]
        mean, per_class = corpus_iou(pairs, 3)
        # class 0: inter 1, union 2; class 1: inter 2, union 3
        assert per_class[0] == 0.5
        assert per_class[1] == pytest.approx(2 / 3)
        assert math.isnan(per_class[2])
        assert mean == pytest.approx((0.5 + 2 / 3) / 2)


class TestFelaHamming:

    def test_point_mass(self):
        y, yhat = [0, 1, 1, 0], [1, 1, 0, 0]
        assert fela_hamming(point_mass(y, 2), yhat) == hamming_loss(y, yhat)

    def test_uniform(self):
        marginals = Marginals(node=[np.array([0.5, 0.5])] * 2)
        assert fela_hamming(marginals, [0, 1]) == 0.5

    def test_exact_under_exact_marginals(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            P = rng.dirichlet(np.ones(2), size=3)
            marginals = Marginals(node=list(P))
            yhat = rng.integers(0, 2, size=3)
            expected = sum(
                np.prod([P[i][y[i]] for i in range(3)]) * hamming_loss(y, yhat)
                for y in itertools.product(range(2), repeat=3)
            )
            assert fela_hamming(marginals, yhat) == pytest.approx(expected, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            fela_hamming(Marginals(node=[np.array([0.5, 0.5])]), [0, 1])


class TestFelaIou:

    def test_point_mass_identity(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            K = int(rng.integers(2, 5))
            n = int(rng.integers(1, 9))
            y, yhat = rng.integers(0, K, size=n), rng.integers(0, K, size=n)
            assert abs(fela_iou(point_mass(y, K), yhat, K) - iou_loss(y, yhat, K)) <= 1e-12

    def test_single_variable(self):
        # class 1: 0.8 / 1; class 0: 0 / 0.2
        marginals = Marginals(node=[np.array([0.2, 0.8])])
        assert fela_iou(marginals, [1], 2) == pytest.approx(0.6, abs=1e-12)

    def test_uniform(self):
        marginals = Marginals(node=[np.array([0.5, 0.5])] * 2)
        assert fela_iou(marginals, [0, 1], 2) == pytest.approx(2 / 3, abs=1e-12)

    def test_class_count_mismatch(self):
        with pytest.raises(DimensionMismatch):
            fela_iou(Marginals(node=[np.array([0.5, 0.5])]), [0], 3)

    def test_dispatch(self):
        marginals = Marginals(node=[np.array([0.5, 0.5])] * 2)
        assert fela(HAMMING, marginals, [0, 1]) == fela_hamming(marginals, [0, 1])
        assert fela(IOU2, marginals, [0, 1]) == fela_iou(marginals, [0, 1], 2)


class TestExpectedLossExact:

    def test_deterministic_model(self):
        model = DataGenerator.unary_model([[-np.inf, 0.0], [0.0, -np.inf], [-np.inf, 0.0]])
        assert expected_loss_exact(model, [0, 0, 0], HAMMING) == pytest.approx(2 / 3)
        assert expected_loss_exact(model, [0, 0, 0], IOU2) == pytest.approx(iou_loss([1, 0, 1], [0, 0, 0], 2))

    def test_zero_radius_ball(self, grid2):
        c, yhat = np.array([1, 0, 0, 1]), np.array([1, 1, 0, 0])
        value = expected_loss_exact(grid2, yhat, IOU2, HammingBall(c, 0))
        assert value == pytest.approx(iou_loss(c, yhat, 2), abs=1e-12)

    def test_matches_fela_hamming(self, grid2):
        marginals = exact_marginals(grid2)
        for yhat in itertools.product(range(2), repeat=4):
            exact = expected_loss_exact(grid2, yhat, HAMMING)
            assert exact == pytest.approx(fela_hamming(marginals, yhat), abs=1e-12)

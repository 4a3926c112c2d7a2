"""/c3rf/src/c3rf/loss.py
Losses on configurations and their factorized expected-loss approximations.

All losses are normalized to [0, 1]. For IOU, a class contributes to the
class mean only when its union (or the FELA denominator) is nonzero, so
both the exact loss and its FELA skip absent classes the same way.
"""
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .constants import ENUMERATION_CAP
from .core.dtypes import LossName
from .core.errors import AllConfigurationsForbidden, DimensionMismatch, EmptyBall, LengthMismatch
from .core.graph import Configuration, GibbsModel, as_configuration
from .core.types import LossKind, Marginals
from .hamming.ball import HammingBall
from .inference.exact import iter_configuration_chunks, log_weights
from .utils.numeric import log_sum_exp


def _pair(y: Iterable[int], yhat: Iterable[int]) -> Tuple[np.ndarray, np.ndarray]:
    a = np.asarray(y, dtype=np.int64)
    b = np.asarray(yhat, dtype=np.int64)
    if a.shape != b.shape:
        raise LengthMismatch(f"Configurations have lengths {a.size} and {b.size}")
    return a, b


def _mean_iou(inter: np.ndarray, union: np.ndarray) -> float:
    live = union > 0
    if not live.any():
        return 1.0
    return float(np.mean(inter[live] / union[live]))


def iou_terms(y: Configuration, yhat: Configuration, K: int) -> Tuple[np.ndarray, np.ndarray]:
    """Per-class intersection and union counts."""
    a, b = _pair(y, yhat)
    if a.size and (max(a.max(), b.max()) >= K or min(a.min(), b.min()) < 0):
        raise DimensionMismatch(f"Labels must lie in 0..{K - 1}")
    classes = np.arange(K)[:, None]
    inter = np.sum((a[None, :] == classes) & (b[None, :] == classes), axis=1)
    union = np.sum((a[None, :] == classes) | (b[None, :] == classes), axis=1)
    return inter, union


def hamming_loss(y: Configuration, yhat: Configuration) -> float:
    """Fraction of disagreeing variables."""
    a, b = _pair(y, yhat)
    if a.size == 0:
        return 0.0
    return float(np.mean(a != b))


def iou_loss(y: Configuration, yhat: Configuration, K: int) -> float:
    """1 - mean IOU over classes present in y or yhat."""
    inter, union = iou_terms(y, yhat, K)
    return 1.0 - _mean_iou(inter, union)


def loss_value(kind: LossKind, y: Configuration, yhat: Configuration) -> float:
    if kind.name == LossName.HAMMING:
        return hamming_loss(y, yhat)
    return iou_loss(y, yhat, kind.num_classes)


def _check_marginals(marginals: Marginals, yhat: Configuration, K: Optional[int] = None) -> np.ndarray:
    yhat = np.asarray(yhat, dtype=np.int64)
    if len(marginals.node) != yhat.size:
        raise DimensionMismatch(
            f"Marginals cover {len(marginals.node)} variables, prediction has {yhat.size}"
        )
    for i, vec in enumerate(marginals.node):
        if K is not None and len(vec) != K:
            raise DimensionMismatch(f"Variable {i} has {len(vec)} labels, expected {K}")
        if not 0 <= yhat[i] < len(vec):
            raise DimensionMismatch(f"Label {yhat[i]} out of range for variable {i}")
    return yhat


def fela_hamming(marginals: Marginals, yhat: Configuration) -> float:
    """(1/n) sum_i (1 - P_i(yhat_i)); exact expected Hamming loss under exact marginals."""
    yhat = _check_marginals(marginals, yhat)
    if yhat.size == 0:
        return 0.0
    picked = np.array([marginals.node[i][k] for i, k in enumerate(yhat)], dtype=float)
    return float(np.mean(1.0 - picked))


def fela_iou(marginals: Marginals, yhat: Configuration, K: int) -> float:
    """
    Factorized IOU approximation.

    Per class k: sum_i P_i(k) [yhat_i = k] / sum_i ([yhat_i = k] + P_i(k) [yhat_i != k]).
    """
    yhat = _check_marginals(marginals, yhat, K)
    if yhat.size == 0:
        return 0.0
    P = np.stack([np.asarray(vec, dtype=float) for vec in marginals.node])
    chosen = yhat[:, None] == np.arange(K)[None, :]
    inter = np.sum(np.where(chosen, P, 0.0), axis=0)
    union = np.sum(np.where(chosen, 1.0, P), axis=0)
    return 1.0 - _mean_iou(inter, union)


def fela(kind: LossKind, marginals: Marginals, yhat: Configuration) -> float:
    if kind.name == LossName.HAMMING:
        return fela_hamming(marginals, yhat)
    return fela_iou(marginals, yhat, kind.num_classes)


def loss_rows(kind: LossKind, Y: np.ndarray, yhat: Configuration) -> np.ndarray:
    """Loss of every row of Y against yhat."""
    Y = np.atleast_2d(np.asarray(Y, dtype=np.int64))
    yhat = np.asarray(yhat, dtype=np.int64)
    if kind.name == LossName.HAMMING:
        if Y.shape[1] == 0:
            return np.zeros(Y.shape[0])
        return np.mean(Y != yhat[None, :], axis=1)
    return np.array([iou_loss(y, yhat, kind.num_classes) for y in Y])


def expected_loss_exact(
    model: GibbsModel,
    yhat: Configuration,
    kind: LossKind,
    ball: Optional[HammingBall] = None,
    cap: int = ENUMERATION_CAP,
) -> float:
    """
    sum_y P(y) loss(y, yhat) by enumeration, optionally over a ball only.

    Raises:
        TooLargeToEnumerate, EmptyBall, AllConfigurationsForbidden
    """
    yhat = as_configuration(model.graph, yhat)
    mask = None
    if ball is not None:
        ball.validate(model.graph)
        mask = ball.contains
    lw = log_weights(model, mask=mask, cap=cap)
    log_z = log_sum_exp(lw)
    if not np.isfinite(log_z):
        if ball is not None:
            raise EmptyBall(f"Hamming ball of radius {ball.radius} has no live member")
        raise AllConfigurationsForbidden("Every configuration has -inf weight")
    probs = np.exp(lw - log_z)
    total = 0.0
    offset = 0
    for block in iter_configuration_chunks(model.graph, cap):
        p = probs[offset:offset + block.shape[0]]
        offset += block.shape[0]
        live = p > 0
        if live.any():
            total += float(np.sum(p[live] * loss_rows(kind, block[live], yhat)))
    return total


def corpus_iou(pairs: Sequence[Tuple[Configuration, Configuration]], K: int) -> Tuple[float, np.ndarray]:
    """
    Corpus-level Jaccard index.

    Intersections and unions are summed per class over all (truth, prediction)
    pairs before dividing.

    Returns:
        (class-mean IOU over classes seen anywhere, per-class IOU with NaN for unseen classes)
    """
    inter = np.zeros(K)
    union = np.zeros(K)
    for y, yhat in pairs:
        i, u = iou_terms(y, yhat, K)
        inter += i
        union += u
    per_class = np.full(K, np.nan)
    live = union > 0
    per_class[live] = inter[live] / union[live]
    return _mean_iou(inter, union), per_class


def loss_matrix(kind: LossKind, configurations: List[Configuration]) -> np.ndarray:
    """L[c, j] = loss(configurations[c], configurations[j])."""
    M = len(configurations)
    L = np.zeros((M, M))
    for c in range(M):
        for j in range(M):
            L[c, j] = loss_value(kind, configurations[c], configurations[j])
    return L

"""/c3rf/src/c3rf/utils/numeric.py
Log-space helpers shared by inference, masses and predictors.
"""
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import logsumexp

AxisArg = Optional[Union[int, Tuple[int, ...]]]


def log_sum_exp(values: np.ndarray, axis: AxisArg = None) -> Union[float, np.ndarray]:
    """
    Overflow-safe log(sum(exp(values))) that tolerates all -inf input.

    Args:
        values: log-domain array
        axis: axis or axes to reduce

    Returns:
        reduced log-domain value(s); -inf where every input is -inf
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        return logsumexp(values, axis=axis)


def normalize_log(values: np.ndarray) -> Optional[np.ndarray]:
    """
    Shift a log vector so its max finite entry is 0.

    Returns None when every entry is -inf.
    """
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        return None
    return values - finite.max()


def log_to_probabilities(values: np.ndarray) -> Optional[np.ndarray]:
    """Exponentiate and normalize a log-domain table; None if it is all -inf."""
    shifted = normalize_log(np.asarray(values, dtype=float))
    if shifted is None:
        return None
    probs = np.exp(shifted)
    return probs / probs.sum()


def max_abs_change(old: np.ndarray, new: np.ndarray) -> float:
    """Largest absolute difference between two log messages (-inf == -inf counts as 0)."""
    both_neg_inf = np.isneginf(old) & np.isneginf(new)
    with np.errstate(invalid="ignore"):
        diff = np.abs(np.where(both_neg_inf, 0.0, new - old))
    if diff.size == 0:
        return 0.0
    return float(np.max(diff))


def xlogx_sum(probs: np.ndarray) -> float:
    """Sum of p log p with 0 log 0 = 0."""
    p = np.asarray(probs, dtype=float).ravel()
    nz = p > 0
    return float(np.sum(p[nz] * np.log(p[nz])))


def entropy(probs: np.ndarray) -> float:
    return -xlogx_sum(probs)


def normalized_weights(log_weights: Sequence[float]) -> np.ndarray:
    """
    Linear-domain weights summing to 1, computed after a max subtraction.

    All -inf input yields all-zero weights.
    """
    lw = np.asarray(log_weights, dtype=float)
    finite = lw[np.isfinite(lw)]
    if finite.size == 0:
        return np.zeros_like(lw)
    weights = np.exp(lw - finite.max())
    return weights / weights.sum()


def stable_argmin(values: Sequence[float]) -> int:
    """Index of the smallest value; ties go to the smallest index."""
    return int(np.argmin(np.asarray(values, dtype=float)))

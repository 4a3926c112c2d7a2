"""/c3rf/src/c3rf/inference/exact.py
Brute-force oracles: partition function, marginals, MAP and exact sampling
by walking the whole configuration space in lexicographic order.
"""
import logging
from typing import Callable, Iterator, Optional, Tuple

import numpy as np

from ..constants import ENUMERATION_CAP
from ..core.errors import AllConfigurationsForbidden, TooLargeToEnumerate
from ..core.graph import Configuration, FactorGraph, GibbsModel, score_batch
from ..core.types import Marginals
from ..utils.numeric import log_sum_exp

logger = logging.getLogger(__name__)

CHUNK_SIZE = 1 << 16

# Optional per-chunk filter: (configurations) -> boolean mask of rows to keep
ConfigurationMask = Callable[[np.ndarray], np.ndarray]


def check_enumerable(graph: FactorGraph, cap: int = ENUMERATION_CAP) -> int:
    """Return the configuration count or raise TooLargeToEnumerate."""
    total = graph.num_configurations()
    if total > cap:
        raise TooLargeToEnumerate(f"{total} configurations exceed the enumeration cap of {cap}")
    return total


def iter_configuration_chunks(
    graph: FactorGraph, cap: int = ENUMERATION_CAP, chunk_size: int = CHUNK_SIZE
) -> Iterator[np.ndarray]:
    """Yield (m, n) blocks of configurations in lexicographic order."""
    total = check_enumerable(graph, cap)
    cards = tuple(int(k) for k in graph.cardinalities)
    if not cards:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    for start in range(0, total, chunk_size):
        flat = np.arange(start, min(start + chunk_size, total))
        yield np.stack(np.unravel_index(flat, cards), axis=1).astype(np.int64)


def enumerate_configurations(graph: FactorGraph, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """Every configuration as one (total, n) array."""
    return np.concatenate(list(iter_configuration_chunks(graph, cap)), axis=0)


def log_weights(
    model: GibbsModel, mask: Optional[ConfigurationMask] = None, cap: int = ENUMERATION_CAP
) -> np.ndarray:
    """S(y) / T for every configuration in lexicographic order; masked rows get -inf."""
    parts = []
    for block in iter_configuration_chunks(model.graph, cap):
        lw = score_batch(model, block) / model.temperature
        if mask is not None:
            lw = np.where(mask(block), lw, -np.inf)
        parts.append(lw)
    return np.concatenate(parts)


def exact_log_z(model: GibbsModel, cap: int = ENUMERATION_CAP) -> float:
    """log sum_y exp(S(y) / T) by full enumeration."""
    return float(log_sum_exp(log_weights(model, cap=cap)))


def marginals_from_log_weights(
    model: GibbsModel, lw: np.ndarray, cap: int = ENUMERATION_CAP
) -> Tuple[float, Marginals]:
    """
    Normalize enumerated log-weights and accumulate node and factor marginals.

    Returns:
        (log partition of the weights, exact Marginals)

    Raises:
        AllConfigurationsForbidden: every weight is -inf
    """
    log_z = float(log_sum_exp(lw))
    if not np.isfinite(log_z):
        raise AllConfigurationsForbidden("Every configuration has -inf weight")
    probs = np.exp(lw - log_z)
    graph = model.graph
    node = [np.zeros(int(k)) for k in graph.cardinalities]
    factor = [np.zeros(t.shape) for t in graph.shaped_tables]
    offset = 0
    for block in iter_configuration_chunks(graph, cap):
        p = probs[offset:offset + block.shape[0]]
        offset += block.shape[0]
        for v in range(graph.num_variables):
            node[v] += np.bincount(block[:, v], weights=p, minlength=node[v].size)
        for f, fac in enumerate(graph.factors):
            shape = factor[f].shape
            flat = np.ravel_multi_index(tuple(block[:, v] for v in fac.scope), shape)
            factor[f] += np.bincount(flat, weights=p, minlength=factor[f].size).reshape(shape)
    node = [vec / vec.sum() for vec in node]
    factor = [tab / tab.sum() for tab in factor]
    return log_z, Marginals(node=node, factor=factor, converged=True, iterations=0)


def exact_marginals(model: GibbsModel, cap: int = ENUMERATION_CAP) -> Marginals:
    """Exact node and factor marginals by enumeration."""
    _, marginals = marginals_from_log_weights(model, log_weights(model, cap=cap), cap)
    return marginals


def map_exhaustive(model: GibbsModel, cap: int = ENUMERATION_CAP) -> Configuration:
    """argmax_y S(y); the lexicographically smallest maximizer wins ties."""
    scores = log_weights(model, cap=cap)
    if not np.isfinite(scores).any():
        raise AllConfigurationsForbidden("Every configuration has -inf score")
    best = int(np.argmax(scores))
    cards = tuple(int(k) for k in model.graph.cardinalities)
    if not cards:
        return np.zeros(0, dtype=np.int64)
    return np.array(np.unravel_index(best, cards), dtype=np.int64)


def sample_exact(
    model: GibbsModel, num_samples: int, seed: int, cap: int = ENUMERATION_CAP
) -> np.ndarray:
    """
    Draw configurations from the Gibbs distribution.

    Returns:
        (num_samples, n) integer array
    """
    lw = log_weights(model, cap=cap)
    log_z = log_sum_exp(lw)
    if not np.isfinite(log_z):
        raise AllConfigurationsForbidden("Every configuration has -inf weight")
    probs = np.exp(lw - log_z)
    probs /= probs.sum()
    rng = np.random.default_rng(seed)
    picks = rng.choice(probs.size, size=num_samples, p=probs)
    cards = tuple(int(k) for k in model.graph.cardinalities)
    if not cards:
        return np.zeros((num_samples, 0), dtype=np.int64)
    return np.stack(np.unravel_index(picks, cards), axis=1).astype(np.int64)


def _align(scope: Tuple[int, ...], table: np.ndarray, union: Tuple[int, ...]) -> np.ndarray:
    """Transpose and reshape a factor table so it broadcasts over `union`."""
    present = [u for u in union if u in scope]
    t = np.transpose(table, [scope.index(u) for u in present])
    shape = [t.shape[present.index(u)] if u in scope else 1 for u in union]
    return t.reshape(shape)


def elimination_log_z(model: GibbsModel, cap: int = ENUMERATION_CAP) -> float:
    """
    Exact log Z by variable elimination with a greedy smallest-table ordering.

    Used where the joint space is too large to walk but the graph is thin,
    e.g. graphs augmented with cardinality trees.

    Raises:
        TooLargeToEnumerate: an intermediate table would exceed `cap` entries
    """
    graph = model.graph
    cards = [int(k) for k in graph.cardinalities]
    buckets = [
        (tuple(f.scope), table / model.temperature)
        for f, table in zip(graph.factors, graph.shaped_tables)
    ]
    remaining = set(range(graph.num_variables))
    total = 0.0
    while remaining:
        def cost(v: int) -> int:
            union = set()
            for scope, _ in buckets:
                if v in scope:
                    union.update(scope)
            size = 1
            for u in union:
                size *= cards[u]
            return size

        v = min(sorted(remaining), key=cost)
        remaining.discard(v)
        involved = [(s, t) for s, t in buckets if v in s]
        buckets = [(s, t) for s, t in buckets if v not in s]
        if not involved:
            total += float(np.log(cards[v]))
            continue
        union = tuple(sorted({u for s, _ in involved for u in s}))
        size = 1
        for u in union:
            size *= cards[u]
        if size > cap:
            raise TooLargeToEnumerate(f"Elimination table of {size} entries exceeds the cap of {cap}")
        combined = sum(_align(s, t, union) for s, t in involved)
        combined = np.broadcast_to(combined, tuple(cards[u] for u in union))
        reduced = log_sum_exp(combined, axis=union.index(v))
        rest = tuple(u for u in union if u != v)
        if rest:
            buckets.append((rest, np.asarray(reduced)))
        else:
            total += float(reduced)
    for _, table in buckets:
        total += float(np.sum(table))
    return total

"""/c3rf/src/c3rf/inference/bp.py
Log-space sum-product and max-product message passing on factor graphs,
plus the Bethe estimate of log Z.

Schedule: sequential round-robin over edges in (variable id, factor id)
order. Messages are updated in place, and a variable sends its outgoing
messages right after its incoming ones are refreshed. Messages are shifted
so their max finite entry is 0; damping mixes old and new log-messages.
"""
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..constants import DEFAULT_LOOPY_DAMPING
from ..core.errors import AllConfigurationsForbidden, DimensionMismatch, GraphError
from ..core.graph import Configuration, GibbsModel, score
from ..core.types import BPSettings, Marginals
from ..utils.numeric import (
    log_sum_exp,
    log_to_probabilities,
    max_abs_change,
    normalize_log,
    xlogx_sum,
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]  # (factor index, position in scope)


class BeliefPropagator:
    """Message store and schedule for one inference call on one model."""

    def __init__(self, model: GibbsModel, settings: Optional[BPSettings] = None, max_product: bool = False):
        graph = model.graph
        if graph.num_variables == 0:
            raise GraphError("Belief propagation needs at least one variable")
        self.model = model
        self.graph = graph
        self.settings = settings or BPSettings()
        self.max_product = max_product
        self.tables = [table / model.temperature for table in graph.shaped_tables]
        if self.settings.damping is None:
            self.damping = 0.0 if graph.is_forest() else DEFAULT_LOOPY_DAMPING
        else:
            self.damping = self.settings.damping
        cards = graph.cardinalities
        self.factor_to_var: Dict[Edge, np.ndarray] = {}
        self.var_to_factor: Dict[Edge, np.ndarray] = {}
        for f, factor in enumerate(graph.factors):
            for pos, v in enumerate(factor.scope):
                self.factor_to_var[(f, pos)] = np.zeros(int(cards[v]))
                self.var_to_factor[(f, pos)] = np.zeros(int(cards[v]))
        self.converged = False
        self.iterations = 0

    def _reduce(self, values: np.ndarray, axes: Tuple[int, ...]) -> np.ndarray:
        if not axes:
            return values
        if self.max_product:
            return np.max(values, axis=axes)
        return log_sum_exp(values, axis=axes)

    def _send_from_variable(self, v: int) -> None:
        edges = self.graph.adjacency[v]
        incoming = [self.factor_to_var[e] for e in edges]
        zero = np.zeros(int(self.graph.cardinalities[v]))
        for i, e in enumerate(edges):
            # leave-one-out sum; entries may be -inf
            others = sum((msg for j, msg in enumerate(incoming) if j != i), zero)
            out = normalize_log(others)
            if out is None:
                raise AllConfigurationsForbidden(
                    f"Message from variable {v} to factor {e[0]} is all -inf"
                )
            self.var_to_factor[e] = out

    def _update_variable_messages(self) -> None:
        for v in range(self.graph.num_variables):
            self._send_from_variable(v)

    def _factor_message(self, f: int, pos: int) -> np.ndarray:
        table = self.tables[f]
        scope = self.graph.factors[f].scope
        values = table
        for q in range(len(scope)):
            if q == pos:
                continue
            shape = [1] * table.ndim
            shape[q] = table.shape[q]
            values = values + self.var_to_factor[(f, q)].reshape(shape)
        axes = tuple(q for q in range(table.ndim) if q != pos)
        return self._reduce(values, axes)

    def _refresh_factor_message(self, f: int, pos: int) -> float:
        """Recompute one factor-to-variable message in place; returns its change."""
        d = self.damping
        old = self.factor_to_var[(f, pos)]
        new = normalize_log(self._factor_message(f, pos))
        if new is None:
            raise AllConfigurationsForbidden(
                f"Message from factor {f} to variable {self.graph.factors[f].scope[pos]} is all -inf"
            )
        if d > 0:
            new = normalize_log((1.0 - d) * new + d * old)
            if new is None:
                raise AllConfigurationsForbidden(f"Damped message from factor {f} is all -inf")
        self.factor_to_var[(f, pos)] = new
        return max_abs_change(old, new)

    def sweep(self) -> float:
        """
        One round-robin pass over the edges in (variable id, factor id) order.

        Each variable refreshes its incoming factor messages, then sends its
        outgoing messages.

        Returns:
            largest absolute change of a factor-to-variable log-message
        """
        delta = 0.0
        for v, edges in enumerate(self.graph.adjacency):
            for f, pos in edges:
                delta = max(delta, self._refresh_factor_message(f, pos))
            self._send_from_variable(v)
        return delta

    def run(self) -> "BeliefPropagator":
        """Sweep until the largest message change drops below tol or the budget runs out."""
        tol = self.settings.convergence_tol
        delta = np.inf
        for iteration in range(1, self.settings.max_iterations + 1):
            delta = self.sweep()
            self.iterations = iteration
            if delta < tol:
                self.converged = True
                break
        self._update_variable_messages()
        if self.converged:
            logger.debug("BP converged after %d iterations", self.iterations)
        else:
            logger.warning(
                "BP did not converge in %d iterations (last change %.3g)", self.iterations, delta
            )
        return self

    def node_log_belief(self, v: int) -> np.ndarray:
        edges = self.graph.adjacency[v]
        if not edges:
            return np.zeros(int(self.graph.cardinalities[v]))
        return np.sum([self.factor_to_var[e] for e in edges], axis=0)

    def factor_log_belief(self, f: int) -> np.ndarray:
        table = self.tables[f]
        values = table
        for q in range(table.ndim):
            shape = [1] * table.ndim
            shape[q] = table.shape[q]
            values = values + self.var_to_factor[(f, q)].reshape(shape)
        return values

    def marginals(self) -> Marginals:
        node: List[np.ndarray] = []
        for v in range(self.graph.num_variables):
            probs = log_to_probabilities(self.node_log_belief(v))
            if probs is None:
                raise AllConfigurationsForbidden(f"Belief of variable {v} is all -inf")
            node.append(probs)
        factor: List[np.ndarray] = []
        for f in range(self.graph.num_factors):
            probs = log_to_probabilities(self.factor_log_belief(f))
            if probs is None:
                raise AllConfigurationsForbidden(f"Belief of factor {f} is all -inf")
            factor.append(probs)
        return Marginals(node=node, factor=factor, converged=self.converged, iterations=self.iterations)

    def decode(self) -> Configuration:
        """Per-variable argmax of the beliefs; the smallest label wins ties."""
        return np.array(
            [int(np.argmax(self.node_log_belief(v))) for v in range(self.graph.num_variables)],
            dtype=np.int64,
        )


def sum_product(model: GibbsModel, settings: Optional[BPSettings] = None) -> Marginals:
    """
    Node and factor beliefs from log-space sum-product.

    Exact on forests. Non-convergence is reported through Marginals.converged.

    Raises:
        AllConfigurationsForbidden: a message or belief collapsed to all -inf
    """
    return BeliefPropagator(model, settings).run().marginals()


def map_maxproduct(model: GibbsModel, settings: Optional[BPSettings] = None) -> Configuration:
    """Max-product MAP estimate; exact on forests, heuristic on loopy graphs."""
    bp = BeliefPropagator(model, settings, max_product=True).run()
    y = bp.decode()
    logger.debug("Max-product MAP score %.6g (converged=%s)", score(model, y), bp.converged)
    return y


def bethe_log_z(model: GibbsModel, marginals: Marginals) -> float:
    """
    Bethe estimate of log Z for weights exp(S / T).

    sum_F sum_yF mu_F (theta_F / T - log mu_F) + sum_i (N(i) - 1) sum_yi mu_i log mu_i,
    with zero-probability entries contributing nothing.
    """
    graph = model.graph
    if len(marginals.factor) != graph.num_factors or len(marginals.node) != graph.num_variables:
        raise DimensionMismatch("Marginals were not produced on this model")
    total = 0.0
    for f, table in enumerate(graph.shaped_tables):
        mu = np.asarray(marginals.factor[f], dtype=float).reshape(table.shape)
        live = mu > 0
        theta = table[live] / model.temperature
        total += float(np.sum(mu[live] * (theta - np.log(mu[live]))))
    for v in range(graph.num_variables):
        total += (graph.degree(v) - 1) * xlogx_sum(marginals.node[v])
    return total

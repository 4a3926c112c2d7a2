"""/c3rf/src/c3rf/hamming/expansion.py
Rewrite a multi-label model as an equivalent binary model.

Variable i with K_i labels becomes K_i indicator variables b_{i,k}. Each
entry theta_F(y_F) of an original table becomes a factor over the
indicators of that joint assignment, paying theta_F(y_F) when all of them
are ON. A 1-of-K cardinality gadget per original variable keeps exactly one
indicator ON, so valid indicator assignments and original configurations
correspond one to one with equal scores.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from ..core.graph import Configuration, GibbsModel, GraphBuilder, as_configuration
from .cardinality import CardinalityTree, CountNode, build_cardinality_tree, constrain_root

logger = logging.getLogger(__name__)

# Counts stay below 2 in a 1-of-K gadget; 2 means "too many ON".
ONE_OF_K_CAP = 2


@dataclass(frozen=True, eq=False)
class ExpandedBinaryGraph:
    """A binary model equivalent to `original`, with its indicator map and gadgets."""
    model: GibbsModel
    original: GibbsModel
    indicators: Tuple[Tuple[int, ...], ...]
    gadgets: Tuple[CardinalityTree, ...]

    @property
    def num_indicators(self) -> int:
        return sum(len(row) for row in self.indicators)

    def encode(self, y: Iterable[int]) -> Configuration:
        """Full assignment of the expanded model (indicators and gadget counts) for y."""
        y = as_configuration(self.original.graph, y)
        assignment = np.zeros(self.model.num_variables, dtype=np.int64)
        for i, row in enumerate(self.indicators):
            assignment[row[y[i]]] = 1
        for gadget in self.gadgets:
            gadget.fill_counts(assignment)
        return assignment

    def decode(self, assignment: np.ndarray) -> Configuration:
        """Original configuration from an indicator assignment with one ON per variable."""
        return np.array(
            [int(np.argmax([assignment[b] for b in row])) for row in self.indicators],
            dtype=np.int64,
        )


def expand_multilabel(model: GibbsModel) -> ExpandedBinaryGraph:
    """
    Binary expansion with 1-of-K gadgets.

    Zero-valued table entries add nothing to any score and are skipped.
    """
    graph = model.graph
    cards = [int(k) for k in graph.cardinalities]
    builder = GraphBuilder()
    indicators = tuple(tuple(builder.add_variable(2) for _ in range(k)) for k in cards)

    for factor, table in zip(graph.factors, graph.shaped_tables):
        arity = len(factor.scope)
        all_on = (1,) * arity
        for joint in itertools.product(*(range(s) for s in table.shape)):
            value = table[joint]
            if value == 0.0:
                continue
            scope = [indicators[v][k] for v, k in zip(factor.scope, joint)]
            entries = np.zeros((2,) * arity)
            entries[all_on] = value
            builder.add_factor(scope, entries)

    gadgets = []
    for row in indicators:
        leaves = [CountNode(b, (0, 1)) for b in row]
        tree = build_cardinality_tree(builder, leaves, ONE_OF_K_CAP)
        constrain_root(builder, tree.root, lambda count: count == 1)
        gadgets.append(tree)

    expanded = GibbsModel(builder.build(), model.temperature)
    logger.debug(
        "Expanded %d variables into %d indicators (%d variables, %d factors in total)",
        graph.num_variables, sum(cards), expanded.num_variables, expanded.graph.num_factors,
    )
    return ExpandedBinaryGraph(expanded, model, indicators, tuple(gadgets))

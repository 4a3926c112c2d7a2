"""/c3rf/src/c3rf/hamming/cardinality.py
Cardinality trees: balanced binary trees of auxiliary count variables whose
root state is the number of ON leaves, saturated at a cap.

A count node is a graph variable together with the count each of its states
stands for. Leaves are ordinary variables (the count of a label says whether
that label is ON); internal nodes are count variables with states
0..min(subtree size, cap), tied to their two children by a hard sum factor.
"""
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from ..core.graph import GraphBuilder


@dataclass(frozen=True)
class CountNode:
    variable: int
    counts: Tuple[int, ...]

    @property
    def max_count(self) -> int:
        return max(self.counts)


@dataclass(frozen=True)
class CardinalityTree:
    """
    A cardinality tree attached to a GraphBuilder.

    joins lists (parent count variable, left child, right child) in build
    order, so children always precede their parent.
    """
    leaves: Tuple[CountNode, ...]
    joins: Tuple[Tuple[int, CountNode, CountNode], ...]
    root: CountNode
    saturation_cap: int

    def fill_counts(self, assignment: np.ndarray) -> None:
        """Write the count-variable states implied by the leaf states, in place."""
        for parent, left, right in self.joins:
            total = left.counts[assignment[left.variable]] + right.counts[assignment[right.variable]]
            assignment[parent] = min(total, self.saturation_cap)


def join_counts(builder: GraphBuilder, left: CountNode, right: CountNode, cap: int) -> CountNode:
    """Add a count variable equal to min(left + right, cap) and its hard sum factor."""
    size = min(left.max_count + right.max_count, cap) + 1
    parent = builder.add_variable(size)
    cl = np.asarray(left.counts)[:, None, None]
    cr = np.asarray(right.counts)[None, :, None]
    states = np.arange(size)[None, None, :]
    table = np.where(states == np.minimum(cl + cr, cap), 0.0, -np.inf)
    builder.add_factor([left.variable, right.variable, parent], table)
    return CountNode(parent, tuple(range(size)))


def build_cardinality_tree(builder: GraphBuilder, leaves: Sequence[CountNode], cap: int) -> CardinalityTree:
    """
    Balanced binary tree over `leaves` in the given order.

    A single leaf is its own root; no count variable is added for it.
    """
    if not leaves:
        raise ValueError("A cardinality tree needs at least one leaf")
    if cap < 1:
        raise ValueError(f"Saturation cap must be >= 1, got {cap}")
    joins: List[Tuple[int, CountNode, CountNode]] = []

    def build(nodes: Sequence[CountNode]) -> CountNode:
        if len(nodes) == 1:
            return nodes[0]
        mid = (len(nodes) + 1) // 2
        left, right = build(nodes[:mid]), build(nodes[mid:])
        parent = join_counts(builder, left, right, cap)
        joins.append((parent.variable, left, right))
        return parent

    root = build(list(leaves))
    return CardinalityTree(tuple(leaves), tuple(joins), root, cap)


def merge_trees(builder: GraphBuilder, trees: Sequence[CardinalityTree], cap: int) -> CardinalityTree:
    """Sum the roots of several trees under one new root (two subtrees for binary Hamming)."""
    if len(trees) == 1:
        return trees[0]
    left, right = trees[0], merge_trees(builder, trees[1:], cap)
    parent = join_counts(builder, left.root, right.root, cap)
    joins = left.joins + right.joins + ((parent.variable, left.root, right.root),)
    return CardinalityTree(left.leaves + right.leaves, joins, parent, cap)


def constrain_root(builder: GraphBuilder, node: CountNode, allowed: Callable[[int], bool]) -> int:
    """Add a unary factor on a count node: 0 where the count is allowed, -inf otherwise."""
    table = np.array([0.0 if allowed(c) else -np.inf for c in node.counts])
    return builder.add_factor([node.variable], table)

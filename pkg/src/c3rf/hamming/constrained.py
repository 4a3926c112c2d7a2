"""/c3rf/src/c3rf/hamming/constrained.py
Hamming-ball constrained inference: masses Z({c}, R) and constrained node
marginals, by belief propagation on a HOP-augmented graph or by enumeration.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Union

import numpy as np

from ..constants import ENUMERATION_CAP
from ..core.errors import AllConfigurationsForbidden, EmptyBall
from ..core.graph import GibbsModel, GraphBuilder, score
from ..core.types import BPSettings, Marginals
from ..inference.bp import bethe_log_z, sum_product
from ..inference.exact import log_weights, marginals_from_log_weights
from .ball import HammingBall
from .cardinality import CardinalityTree, CountNode, build_cardinality_tree, constrain_root, merge_trees
from .expansion import ExpandedBinaryGraph, expand_multilabel

logger = logging.getLogger(__name__)


@dataclass
class ConstrainedPosterior:
    """Mass and node marginals of the model restricted to one Hamming ball."""
    log_mass: float
    node_marginals: List[np.ndarray]
    converged: bool = True

    def marginals(self) -> Marginals:
        return Marginals(node=list(self.node_marginals), converged=self.converged)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "log_mass": float(self.log_mass),
            "marginals": [vec.tolist() for vec in self.node_marginals],
            "converged": bool(self.converged),
        }


@dataclass(frozen=True, eq=False)
class AugmentedModel:
    """A model carrying a Hamming-ball HOP, plus how to read original marginals off it."""
    model: GibbsModel
    original: GibbsModel
    ball: HammingBall
    tree: CardinalityTree
    expansion: Optional[ExpandedBinaryGraph] = None

    def original_marginals(self, marginals: Marginals) -> List[np.ndarray]:
        n = self.original.num_variables
        if self.expansion is None:
            return [np.asarray(marginals.node[i], dtype=float) for i in range(n)]
        out = []
        for i, row in enumerate(self.expansion.indicators):
            on = np.array([marginals.node[b][1] for b in row], dtype=float)
            total = on.sum()
            if not total > 0:
                raise EmptyBall(f"No indicator of variable {i} can be ON inside the ball")
            out.append(on / total)
        return out


def _is_binary(model: GibbsModel) -> bool:
    return bool(np.all(model.graph.cardinalities == 2))


def augment(
    model_or_expanded: Union[GibbsModel, ExpandedBinaryGraph],
    ball: HammingBall,
    saturation_cap: Optional[int] = None,
) -> AugmentedModel:
    """
    Attach the ball-indicator HOP through a cardinality tree.

    Binary models get the two-subtree construction: one subtree counts OFF
    variables where c is ON, the other counts ON variables where c is OFF,
    and the root adds them. Multi-label models are expanded first and the
    tree counts OFF indicators among those ON in c. The root allows counts
    up to R.
    """
    if isinstance(model_or_expanded, ExpandedBinaryGraph):
        expansion: Optional[ExpandedBinaryGraph] = model_or_expanded
        original = model_or_expanded.original
    elif _is_binary(model_or_expanded):
        expansion = None
        original = model_or_expanded
    else:
        expansion = expand_multilabel(model_or_expanded)
        original = model_or_expanded
    ball.validate(original.graph)
    cap = ball.radius + 1 if saturation_cap is None else int(saturation_cap)
    if cap < ball.radius + 1:
        raise ValueError(f"Saturation cap {cap} cannot represent radius {ball.radius}")
    c = ball.center

    if expansion is None:
        builder = GraphBuilder.from_graph(original.graph)
        groups = [
            [CountNode(i, (1, 0)) for i in range(len(c)) if c[i] == 1],
            [CountNode(i, (0, 1)) for i in range(len(c)) if c[i] == 0],
        ]
        trees = [build_cardinality_tree(builder, leaves, cap) for leaves in groups if leaves]
        tree = merge_trees(builder, trees, cap)
    else:
        builder = GraphBuilder.from_graph(expansion.model.graph)
        leaves = [CountNode(row[c[i]], (1, 0)) for i, row in enumerate(expansion.indicators)]
        tree = build_cardinality_tree(builder, leaves, cap)

    radius = ball.radius
    constrain_root(builder, tree.root, lambda count: count <= radius)
    augmented = GibbsModel(builder.build(), original.temperature)
    logger.debug(
        "Attached Hamming HOP (R=%d, cap=%d): %d variables, %d factors",
        radius, cap, augmented.num_variables, augmented.graph.num_factors,
    )
    return AugmentedModel(augmented, original, ball, tree, expansion)


def attach_hamming_hop(
    model_or_expanded: Union[GibbsModel, ExpandedBinaryGraph],
    ball: HammingBall,
    saturation_cap: Optional[int] = None,
) -> GibbsModel:
    """Model whose weights vanish outside the ball and match the original inside it."""
    return augment(model_or_expanded, ball, saturation_cap).model


def point_mass_posterior(model: GibbsModel, center: np.ndarray) -> ConstrainedPosterior:
    """Radius-0 posterior: a delta at the center with mass exp(S(c) / T)."""
    s = score(model, center)
    if not np.isfinite(s):
        raise EmptyBall("The ball center is forbidden and the radius is 0")
    node = []
    for i, k in enumerate(model.graph.cardinalities):
        vec = np.zeros(int(k))
        vec[int(center[i])] = 1.0
        node.append(vec)
    return ConstrainedPosterior(s / model.temperature, node, True)


def constrained_posterior(
    model: GibbsModel,
    ball: HammingBall,
    settings: Optional[BPSettings] = None,
    saturation_cap: Optional[int] = None,
) -> ConstrainedPosterior:
    """
    Bethe mass and BP marginals of the ball-restricted model.

    Raises:
        EmptyBall: every ball member is forbidden
    """
    ball.validate(model.graph)
    if ball.radius == 0:
        return point_mass_posterior(model, ball.center)
    aug = augment(model, ball, saturation_cap)
    try:
        m = sum_product(aug.model, settings)
    except AllConfigurationsForbidden as exc:
        raise EmptyBall(f"Hamming ball of radius {ball.radius} has no live member: {exc}") from exc
    log_mass = bethe_log_z(aug.model, m)
    return ConstrainedPosterior(log_mass, aug.original_marginals(m), m.converged)


def exact_constrained_oracle(
    model: GibbsModel, ball: HammingBall, cap: int = ENUMERATION_CAP
) -> ConstrainedPosterior:
    """Mass and marginals by enumerating the ball members of the original label space."""
    ball.validate(model.graph)
    lw = log_weights(model, mask=ball.contains, cap=cap)
    try:
        log_mass, marginals = marginals_from_log_weights(model, lw, cap)
    except AllConfigurationsForbidden as exc:
        raise EmptyBall(f"Hamming ball of radius {ball.radius} has no live member") from exc
    return ConstrainedPosterior(log_mass, marginals.node, True)

from .ball import HammingBall, ball_volume, hamming_distance, radius_from_fraction
from .cardinality import CardinalityTree, CountNode, build_cardinality_tree
from .constrained import (
    ConstrainedPosterior,
    attach_hamming_hop,
    constrained_posterior,
    exact_constrained_oracle,
)
from .expansion import ExpandedBinaryGraph, expand_multilabel
from .sampling import sample_mass_uniform_ball

__all__ = [
    'HammingBall', 'ball_volume', 'hamming_distance', 'radius_from_fraction',
    'CardinalityTree', 'CountNode', 'build_cardinality_tree',
    'ConstrainedPosterior', 'attach_hamming_hop', 'constrained_posterior',
    'exact_constrained_oracle', 'ExpandedBinaryGraph', 'expand_multilabel',
    'sample_mass_uniform_ball',
]

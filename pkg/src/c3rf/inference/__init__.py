from .bp import BeliefPropagator, bethe_log_z, map_maxproduct, sum_product
from .exact import (
    elimination_log_z,
    exact_log_z,
    exact_marginals,
    map_exhaustive,
    sample_exact,
)

__all__ = [
    'BeliefPropagator', 'bethe_log_z', 'map_maxproduct', 'sum_product',
    'elimination_log_z', 'exact_log_z', 'exact_marginals', 'map_exhaustive',
    'sample_exact',
]

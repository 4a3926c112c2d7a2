"""/c3rf/src/c3rf/inference/strategy.py
Interchangeable inference back ends: enumeration oracles and belief propagation.
"""
from abc import ABC, abstractmethod
from typing import Optional, Tuple

from ..constants import ENUMERATION_CAP
from ..core.graph import Configuration, GibbsModel
from ..core.types import BPSettings, Marginals
from ..hamming.ball import HammingBall
from ..hamming.constrained import (
    ConstrainedPosterior,
    constrained_posterior,
    exact_constrained_oracle,
    point_mass_posterior,
)
from .bp import bethe_log_z, map_maxproduct, sum_product
from .exact import exact_log_z, exact_marginals, log_weights, map_exhaustive, marginals_from_log_weights


class InferenceStrategy(ABC):
    """Base class for inference strategies."""

    # True when results are exact rather than approximations
    exact: bool = False

    @abstractmethod
    def can_run(self, model: GibbsModel) -> bool:
        """Determine if this strategy can handle the model."""
        pass

    @abstractmethod
    def estimate_cost(self, model: GibbsModel) -> int:
        """Rough operation count, for choosing between strategies."""
        pass

    @abstractmethod
    def marginals(self, model: GibbsModel) -> Marginals:
        pass

    @abstractmethod
    def log_partition(self, model: GibbsModel) -> float:
        pass

    def infer(self, model: GibbsModel) -> Tuple[Marginals, float]:
        """Marginals and log Z together."""
        return self.marginals(model), self.log_partition(model)

    @abstractmethod
    def map_configuration(self, model: GibbsModel) -> Configuration:
        pass

    @abstractmethod
    def constrained(self, model: GibbsModel, ball: HammingBall) -> ConstrainedPosterior:
        """Mass and marginals inside one Hamming ball."""
        pass


class ExactStrategy(InferenceStrategy):
    """Full enumeration of the original label space."""

    exact = True

    def __init__(self, cap: int = ENUMERATION_CAP):
        self.cap = cap

    def can_run(self, model: GibbsModel) -> bool:
        return model.graph.num_configurations() <= self.cap

    def estimate_cost(self, model: GibbsModel) -> int:
        return model.graph.num_configurations() * max(model.graph.num_factors, 1)

    def marginals(self, model: GibbsModel) -> Marginals:
        return exact_marginals(model, self.cap)

    def log_partition(self, model: GibbsModel) -> float:
        return exact_log_z(model, self.cap)

    def infer(self, model: GibbsModel) -> Tuple[Marginals, float]:
        log_z, marginals = marginals_from_log_weights(model, log_weights(model, cap=self.cap), self.cap)
        return marginals, log_z

    def map_configuration(self, model: GibbsModel) -> Configuration:
        return map_exhaustive(model, self.cap)

    def constrained(self, model: GibbsModel, ball: HammingBall) -> ConstrainedPosterior:
        if ball.radius == 0:
            return point_mass_posterior(model, ball.validate(model.graph).center)
        return exact_constrained_oracle(model, ball, self.cap)


class BeliefPropagationStrategy(InferenceStrategy):
    """Sum-product marginals, Bethe log Z and max-product MAP."""

    def __init__(self, settings: Optional[BPSettings] = None, saturation_cap: Optional[int] = None):
        self.settings = settings or BPSettings()
        self.saturation_cap = saturation_cap

    def can_run(self, model: GibbsModel) -> bool:
        return model.num_variables > 0

    def estimate_cost(self, model: GibbsModel) -> int:
        per_sweep = sum(f.table.size * len(f.scope) for f in model.graph.factors)
        return per_sweep * self.settings.max_iterations

    def marginals(self, model: GibbsModel) -> Marginals:
        return sum_product(model, self.settings)

    def log_partition(self, model: GibbsModel) -> float:
        return bethe_log_z(model, sum_product(model, self.settings))

    def infer(self, model: GibbsModel) -> Tuple[Marginals, float]:
        marginals = self.marginals(model)
        return marginals, bethe_log_z(model, marginals)

    def map_configuration(self, model: GibbsModel) -> Configuration:
        return map_maxproduct(model, self.settings)

    def constrained(self, model: GibbsModel, ball: HammingBall) -> ConstrainedPosterior:
        return constrained_posterior(model, ball, self.settings, self.saturation_cap)

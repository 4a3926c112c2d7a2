"""/c3rf/src/c3rf/core/types.py
Value types shared across modules: settings, marginals and predictor parameters.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..constants import (
    DEFAULT_LAMBDAS,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_RADIUS_FRACTIONS,
    DEFAULT_TEMPERATURES,
    DEFAULT_TOLERANCE,
)
from .dtypes import CVMode, LossName, PredictorKind


@dataclass(frozen=True)
class BPSettings:
    """Belief propagation controls.

    Args:
        max_iterations: upper bound on full message sweeps
        convergence_tol: max absolute log-message change that counts as converged
        damping: weight of the previous message in [0, 1); None picks 0 on
            forests and the loopy default otherwise
    """
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    convergence_tol: float = DEFAULT_TOLERANCE
    damping: Optional[float] = None

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not self.convergence_tol > 0:
            raise ValueError(f"convergence_tol must be > 0, got {self.convergence_tol}")
        if self.damping is not None and not 0.0 <= self.damping < 1.0:
            raise ValueError(f"damping must lie in [0, 1), got {self.damping}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BPSettings":
        known = {"max_iterations", "convergence_tol", "damping"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"Unknown BP settings: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_iterations": self.max_iterations,
            "convergence_tol": self.convergence_tol,
            "damping": self.damping,
        }


@dataclass
class Marginals:
    """Per-variable (and optionally per-factor) probability tables.

    Node vectors are indexed by label; factor tables are shaped by the factor
    scope's cardinalities. Mixtures of constrained posteriors carry node
    tables only.
    """
    node: List[np.ndarray]
    factor: List[np.ndarray] = field(default_factory=list)
    converged: bool = True
    iterations: int = 0

    @property
    def num_variables(self) -> int:
        return len(self.node)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "node": [vec.tolist() for vec in self.node],
            "converged": bool(self.converged),
            "iterations": int(self.iterations),
        }


@dataclass(frozen=True)
class LossKind:
    """A loss function choice; IOU needs the class count."""
    name: LossName = LossName.HAMMING
    num_classes: int = 2

    def __post_init__(self) -> None:
        if self.name == LossName.IOU and self.num_classes < 2:
            raise ValueError(f"IOU needs at least 2 classes, got {self.num_classes}")


@dataclass(frozen=True)
class PredictorConfig:
    """The tunable parameter vector of a predictor."""
    kind: PredictorKind = PredictorKind.C3RF_FELA
    radius_fraction: float = 0.0
    temperature: float = 1.0
    loss: LossKind = LossKind()

    def __post_init__(self) -> None:
        if not 0.0 <= self.radius_fraction <= 1.0:
            raise ValueError(f"radius_fraction must lie in [0, 1], got {self.radius_fraction}")
        if not self.temperature > 0:
            raise ValueError(f"temperature must be > 0, got {self.temperature}")


@dataclass(frozen=True)
class ParameterGrid:
    """Candidate values searched during parameter selection."""
    lambdas: Tuple[float, ...] = DEFAULT_LAMBDAS
    radius_fractions: Tuple[float, ...] = DEFAULT_RADIUS_FRACTIONS
    temperatures: Tuple[float, ...] = DEFAULT_TEMPERATURES

    def __post_init__(self) -> None:
        if not (self.lambdas and self.radius_fractions and self.temperatures):
            raise ValueError("Parameter grid lists must be nonempty")
        if any(lam < 0 for lam in self.lambdas):
            raise ValueError("lambdas must be >= 0")
        if any(not 0.0 <= rho <= 1.0 for rho in self.radius_fractions):
            raise ValueError("radius fractions must lie in [0, 1]")
        if any(not t > 0 for t in self.temperatures):
            raise ValueError("temperatures must be > 0")

    def points(self) -> List[Tuple[float, float, float]]:
        """All (lambda, rho, T) triples in canonical lexicographic order."""
        return sorted(
            {(float(lam), float(rho), float(t))
             for lam in self.lambdas
             for rho in self.radius_fractions
             for t in self.temperatures}
        )


@dataclass(frozen=True)
class CVPlan:
    """Cross-validation layout."""
    folds: int = 10
    permutations: int = 1
    seed: int = 0
    mode: CVMode = CVMode.KFOLD

    def __post_init__(self) -> None:
        if self.mode == CVMode.KFOLD and self.folds < 2:
            raise ValueError(f"k-fold needs at least 2 folds, got {self.folds}")
        if self.permutations < 1:
            raise ValueError(f"permutations must be >= 1, got {self.permutations}")

"""/c3rf/src/c3rf/hamming/ball.py
Hamming balls around candidate configurations.
"""
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..core.errors import InvalidConfiguration, LengthMismatch
from ..core.graph import Configuration, FactorGraph, as_configuration


@dataclass(frozen=True, eq=False)
class HammingBall:
    """All configurations within `radius` disagreeing variables of `center`."""
    center: Configuration
    radius: int

    def __post_init__(self) -> None:
        center = np.asarray(self.center, dtype=np.int64).copy()
        center.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", int(self.radius))
        if self.radius < 0:
            raise InvalidConfiguration(f"Ball radius must be >= 0, got {self.radius}")

    def validate(self, graph: FactorGraph) -> "HammingBall":
        as_configuration(graph, self.center)
        if self.radius > graph.num_variables:
            raise InvalidConfiguration(
                f"Ball radius {self.radius} exceeds the {graph.num_variables} variables"
            )
        return self

    def contains(self, configurations: np.ndarray) -> np.ndarray:
        """Row mask of configurations lying inside the ball."""
        Y = np.atleast_2d(configurations)
        return np.sum(Y != self.center[None, :], axis=1) <= self.radius


def hamming_distance(a: Iterable[int], b: Iterable[int]) -> int:
    """Number of positions where two configurations disagree."""
    a = np.asarray(list(a) if not isinstance(a, np.ndarray) else a)
    b = np.asarray(list(b) if not isinstance(b, np.ndarray) else b)
    if a.shape != b.shape:
        raise LengthMismatch(f"Configurations have lengths {a.size} and {b.size}")
    return int(np.sum(a != b))


def ball_volume(n: int, K: int, R: int) -> int:
    """
    Number of configurations within distance R of a point, for n variables of K labels.

    Returns:
        sum_{d=0..R} C(n, d) (K - 1)^d as an exact integer
    """
    if n < 1 or K < 2 or not 0 <= R <= n:
        raise ValueError(f"Invalid ball parameters n={n}, K={K}, R={R}")
    return sum(math.comb(n, d) * (K - 1) ** d for d in range(R + 1))


def radius_from_fraction(rho: float, n: int) -> int:
    """Integer radius round(rho * n), halves rounded up."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"radius fraction must lie in [0, 1], got {rho}")
    return int(math.floor(rho * n + 0.5))

"""/c3rf/src/c3rf/hamming/sampling.py
Uniform-in-ball Monte Carlo estimate of a Hamming-ball mass, the baseline
the Bethe estimate is compared against.
"""
import math

import numpy as np

from ..core.errors import InvalidConfiguration
from ..core.graph import GibbsModel, score_batch
from ..utils.numeric import log_sum_exp
from .ball import HammingBall, ball_volume


def _uniform_cardinality(model: GibbsModel) -> int:
    cards = np.unique(model.graph.cardinalities)
    if cards.size != 1:
        raise InvalidConfiguration("Ball sampling needs every variable to have the same cardinality")
    return int(cards[0])


def sample_ball(ball: HammingBall, num_labels: int, num_samples: int, rng: np.random.Generator) -> np.ndarray:
    """
    Uniform draws from a Hamming ball.

    A distance d is drawn with probability C(n, d) (K - 1)^d / V, then d
    distinct positions, then a non-center label at each of them.

    Returns:
        (num_samples, n) integer array
    """
    n, K, R = ball.center.size, int(num_labels), ball.radius
    volume = ball_volume(n, K, R)
    sizes = np.array([math.comb(n, d) * (K - 1) ** d for d in range(R + 1)], dtype=float)
    distances = rng.choice(R + 1, size=num_samples, p=sizes / float(volume))
    out = np.tile(ball.center, (num_samples, 1))
    for s, d in enumerate(distances):
        if d == 0:
            continue
        positions = rng.choice(n, size=int(d), replace=False)
        shifts = rng.integers(1, K, size=int(d))
        out[s, positions] = (out[s, positions] + shifts) % K
    return out


def sample_mass_uniform_ball(model: GibbsModel, ball: HammingBall, num_samples: int, seed: int) -> float:
    """
    Estimate log Z({c}, R) as log(V * mean_s exp(S(y_s) / T)) with y_s ~ Uniform(ball).

    Deterministic given the seed. Requires a uniform cardinality K.
    """
    if num_samples < 1:
        raise ValueError(f"num_samples must be >= 1, got {num_samples}")
    ball.validate(model.graph)
    K = _uniform_cardinality(model)
    if ball.radius == 0:
        return float(score_batch(model, ball.center[None, :])[0] / model.temperature)
    rng = np.random.default_rng(seed)
    samples = sample_ball(ball, K, num_samples, rng)
    lw = score_batch(model, samples) / model.temperature
    volume = ball_volume(ball.center.size, K, ball.radius)
    return float(math.log(volume) + log_sum_exp(lw) - math.log(num_samples))

"""/c3rf/src/c3rf/predict.py
Candidate-restricted decision rules: MAP, Delta (empirical MBR), Mass,
CRF+FELA and C3RF+FELA, plus mass-averaged mixture marginals.

Every predictor returns the candidate minimizing its objective, with the
smallest index winning ties. Per-candidate weights are formed in log space
and normalized to sum to 1, so every objective value is an expected loss
under the candidate-restricted distribution.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .candidates import CandidateSet
from .core.dtypes import InferenceMethod, LossName, PredictorKind
from .core.errors import DimensionMismatch
from .core.graph import Configuration, GibbsModel
from .core.types import BPSettings, LossKind, Marginals, PredictorConfig
from .factory import InferenceFactory
from .hamming.ball import HammingBall, radius_from_fraction
from .hamming.constrained import ConstrainedPosterior
from .inference.strategy import InferenceStrategy
from .loss import fela, loss_matrix
from .utils.numeric import normalized_weights, stable_argmin

logger = logging.getLogger(__name__)


@dataclass
class Prediction:
    """The chosen candidate with the objective it minimized."""
    chosen: Configuration
    chosen_index: int
    objective_values: np.ndarray
    kind: PredictorKind = PredictorKind.MAP
    log_masses: Optional[np.ndarray] = None
    converged: List[bool] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "chosen": self.chosen,
            "chosen_index": self.chosen_index,
            "objective_values": self.objective_values,
            "diagnostics": {
                "log_masses": self.log_masses,
                "converged": list(self.converged),
            },
        }


def _choose(cands: CandidateSet, objective: np.ndarray, kind: PredictorKind, **diagnostics: Any) -> Prediction:
    index = stable_argmin(objective)
    return Prediction(cands[index].configuration, index, objective, kind, **diagnostics)


def candidate_log_weights(model: GibbsModel, cands: CandidateSet) -> np.ndarray:
    """log(w(y) exp(S(y) / T)) per candidate."""
    return cands.scores / model.temperature + np.log(cands.weights)


def candidate_posteriors(
    model: GibbsModel,
    cands: CandidateSet,
    radius: int,
    strategy: InferenceStrategy,
    workers: int = 1,
) -> List[ConstrainedPosterior]:
    """One constrained posterior per candidate ball, in candidate order."""
    balls = [HammingBall(c.configuration, radius) for c in cands]
    if workers <= 1 or len(balls) <= 1:
        return [strategy.constrained(model, ball) for ball in balls]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda ball: strategy.constrained(model, ball), balls))


def map_predict(model: GibbsModel, cands: CandidateSet) -> Prediction:
    """Candidate 0, the MAP when the set came from DivMBest."""
    cands.require_nonempty()
    objective = np.zeros(len(cands))
    objective[1:] = 1.0
    return _choose(cands, objective, PredictorKind.MAP)


def delta_predict(model: GibbsModel, cands: CandidateSet, loss: LossKind) -> Prediction:
    """argmin_j sum_c loss(y_c, y_j) w(c) exp(S(y_c) / T)."""
    cands.require_nonempty()
    weights = normalized_weights(candidate_log_weights(model, cands))
    L = loss_matrix(loss, [c.configuration for c in cands])
    return _choose(cands, weights @ L, PredictorKind.DELTA)


def _mass_weights(cands: CandidateSet, posteriors: List[ConstrainedPosterior]) -> np.ndarray:
    log_masses = np.array([p.log_mass for p in posteriors], dtype=float)
    return normalized_weights(log_masses + np.log(cands.weights))


def mass_predict(
    model: GibbsModel,
    cands: CandidateSet,
    radius: int,
    loss: LossKind,
    strategy: Optional[InferenceStrategy] = None,
    posteriors: Optional[List[ConstrainedPosterior]] = None,
) -> Prediction:
    """argmin_j sum_c loss(y_c, y_j) w(c) Z({c}, R)."""
    cands.require_nonempty()
    if posteriors is None:
        posteriors = candidate_posteriors(model, cands, radius, strategy or InferenceFactory.create(model))
    weights = _mass_weights(cands, posteriors)
    L = loss_matrix(loss, [c.configuration for c in cands])
    return _choose(
        cands, weights @ L, PredictorKind.MASS,
        log_masses=np.array([p.log_mass for p in posteriors]),
        converged=[p.converged for p in posteriors],
    )


def crf_fela_predict(
    model: GibbsModel,
    cands: CandidateSet,
    loss: LossKind,
    strategy: Optional[InferenceStrategy] = None,
    marginals: Optional[Marginals] = None,
) -> Prediction:
    """argmin_j FELA(P, y_j) with P the unconstrained marginals."""
    cands.require_nonempty()
    if marginals is None:
        marginals = (strategy or InferenceFactory.create(model)).marginals(model)
    objective = np.array([fela(loss, marginals, c.configuration) for c in cands])
    return _choose(cands, objective, PredictorKind.CRF_FELA, converged=[marginals.converged])


def c3rf_fela_predict(
    model: GibbsModel,
    cands: CandidateSet,
    radius: int,
    loss: LossKind,
    strategy: Optional[InferenceStrategy] = None,
    posteriors: Optional[List[ConstrainedPosterior]] = None,
) -> Prediction:
    """argmin_j sum_c w(c) Z({c}, R) FELA(P_{c,R}, y_j)."""
    cands.require_nonempty()
    if posteriors is None:
        posteriors = candidate_posteriors(model, cands, radius, strategy or InferenceFactory.create(model))
    weights = _mass_weights(cands, posteriors)
    F = np.array([
        [fela(loss, post.marginals(), c.configuration) for c in cands]
        for post in posteriors
    ])
    return _choose(
        cands, weights @ F, PredictorKind.C3RF_FELA,
        log_masses=np.array([p.log_mass for p in posteriors]),
        converged=[p.converged for p in posteriors],
    )


def mixture_marginals(cands: CandidateSet, posteriors: List[ConstrainedPosterior]) -> Marginals:
    """Per-variable mixture of constrained marginals weighted by w(c) Z({c}, R)."""
    weights = _mass_weights(cands, posteriors)
    n = len(posteriors[0].node_marginals)
    node = []
    for i in range(n):
        mix = sum(w * np.asarray(p.node_marginals[i], dtype=float) for w, p in zip(weights, posteriors))
        node.append(mix / mix.sum())
    return Marginals(node=node, converged=all(p.converged for p in posteriors))


def c3rf_marginals(
    model: GibbsModel,
    cands: CandidateSet,
    radius: int,
    strategy: Optional[InferenceStrategy] = None,
    posteriors: Optional[List[ConstrainedPosterior]] = None,
) -> Marginals:
    """Mass-averaged marginals of the candidate-constrained model."""
    cands.require_nonempty()
    if posteriors is None:
        posteriors = candidate_posteriors(model, cands, radius, strategy or InferenceFactory.create(model))
    return mixture_marginals(cands, posteriors)


def log_prob_objective(marginals: Marginals, ground_truth: Configuration, K: int) -> Dict[int, float]:
    """
    Per-class mean log-probability of the ground truth.

    Returns:
        {k: mean over i with GT_i = k of log P_i(k)} for classes present in the ground truth
    """
    gt = np.asarray(ground_truth, dtype=np.int64)
    if len(marginals.node) != gt.size:
        raise DimensionMismatch(f"Marginals cover {len(marginals.node)} variables, ground truth has {gt.size}")
    out: Dict[int, float] = {}
    for k in range(K):
        members = np.flatnonzero(gt == k)
        if members.size == 0:
            continue
        probs = np.array([marginals.node[i][k] for i in members], dtype=float)
        with np.errstate(divide="ignore"):
            out[k] = float(np.mean(np.log(probs)))
    return out


def predict(
    model: GibbsModel,
    cands: CandidateSet,
    config: PredictorConfig,
    settings: Optional[BPSettings] = None,
    method: InferenceMethod = InferenceMethod.AUTO,
    workers: int = 1,
    posteriors: Optional[List[ConstrainedPosterior]] = None,
) -> Prediction:
    """
    Run the predictor named by `config` at its temperature and radius fraction.

    `posteriors` may carry precomputed constrained posteriors for the
    configured radius and temperature.
    """
    model = model.with_temperature(config.temperature)
    kind = PredictorKind(config.kind)
    if kind == PredictorKind.MAP:
        return map_predict(model, cands)
    if kind == PredictorKind.DELTA:
        return delta_predict(model, cands, config.loss)
    strategy = InferenceFactory.create(model, method, settings)
    if kind == PredictorKind.CRF_FELA:
        return crf_fela_predict(model, cands, config.loss, strategy)
    radius = radius_from_fraction(config.radius_fraction, model.num_variables)
    if posteriors is None:
        cands.require_nonempty()
        posteriors = candidate_posteriors(model, cands, radius, strategy, workers)
    if kind == PredictorKind.MASS:
        return mass_predict(model, cands, radius, config.loss, posteriors=posteriors)
    return c3rf_fela_predict(model, cands, radius, config.loss, posteriors=posteriors)


def loss_kind(name: str, num_classes: int = 2) -> LossKind:
    return LossKind(LossName(name), num_classes)

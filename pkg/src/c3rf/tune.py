"""/c3rf/src/c3rf/tune.py
Parameter selection by cross-validated grid search.

ERM selects on corpus-level task performance (1 - corpus loss); BDT selects
on the mean per-instance, class-averaged log-probability of the ground
truth under the predictor's marginals. Higher is better for both.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .candidates import CandidateSet, divmbest
from .core.dtypes import CVMode, InferenceMethod, LossName, PredictorKind, SolverName, TuneObjective
from .core.graph import Configuration
from .core.types import BPSettings, CVPlan, LossKind, Marginals, ParameterGrid, PredictorConfig
from .corpus import Corpus, Instance
from .factory import InferenceFactory
from .hamming.ball import HammingBall, radius_from_fraction
from .hamming.constrained import ConstrainedPosterior
from .loss import corpus_iou, hamming_loss
from .predict import crf_fela_predict, log_prob_objective, mixture_marginals, predict

logger = logging.getLogger(__name__)

GridPoint = Tuple[float, float, float]  # (lambda, rho, T)

REPORT_COLUMNS = ["permutation", "fold", "lambda", "rho", "T", "heldin_score", "heldout_score"]

__all__ = [
    "Corpus", "Instance", "CorpusEvaluator", "TuneResult", "evaluate_corpus",
    "fold_partitions", "grid_search", "grid_search_erm", "grid_search_bdt",
]


class CorpusEvaluator:
    """
    Runs one predictor kind over a corpus at many grid points.

    Candidate sets are cached per (instance, lambda), constrained posteriors
    per (instance, center, R, T), and predictions and objectives per
    (instance, grid point), so folds only re-aggregate cached results.
    """

    def __init__(
        self,
        corpus: Corpus,
        kind: PredictorKind = PredictorKind.C3RF_FELA,
        loss: Optional[LossKind] = None,
        num_candidates: int = 10,
        settings: Optional[BPSettings] = None,
        method: InferenceMethod = InferenceMethod.AUTO,
        solver: SolverName = SolverName.AUTO,
    ):
        if len(corpus) == 0:
            raise ValueError("The corpus is empty")
        self.corpus = corpus
        self.kind = PredictorKind(kind)
        self.loss = loss or LossKind(LossName.HAMMING, corpus.num_classes)
        self.num_candidates = num_candidates
        self.settings = settings
        self.method = method
        self.solver = solver
        self._candidates: Dict[Tuple[int, float], CandidateSet] = {}
        self._posteriors: Dict[Tuple[int, bytes, int, float], ConstrainedPosterior] = {}
        self._predictions: Dict[Tuple[int, GridPoint], Configuration] = {}
        self._log_probs: Dict[Tuple[int, GridPoint], float] = {}
        self._unconstrained: Dict[Tuple[int, float], Marginals] = {}

    def config(self, point: GridPoint) -> PredictorConfig:
        _, rho, T = point
        return PredictorConfig(self.kind, rho, T, self.loss)

    def candidates(self, i: int, lam: float) -> CandidateSet:
        key = (i, lam)
        if key not in self._candidates:
            inst = self.corpus.instances[i]
            if inst.candidates is not None:
                cands = inst.candidates
            else:
                cands = divmbest(inst.model, self.num_candidates, lam, self.solver, self.settings)
            self._candidates[key] = cands
        return self._candidates[key]

    def posteriors(self, i: int, point: GridPoint) -> List[ConstrainedPosterior]:
        lam, rho, T = point
        model = self.corpus.instances[i].model.with_temperature(T)
        radius = radius_from_fraction(rho, model.num_variables)
        strategy = InferenceFactory.create(model, self.method, self.settings)
        out = []
        for cand in self.candidates(i, lam):
            key = (i, cand.key, radius, T)
            if key not in self._posteriors:
                self._posteriors[key] = strategy.constrained(model, HammingBall(cand.configuration, radius))
            out.append(self._posteriors[key])
        return out

    def _needs_posteriors(self) -> bool:
        return self.kind in (PredictorKind.MASS, PredictorKind.C3RF_FELA)

    def prediction(self, i: int, point: GridPoint) -> Configuration:
        key = (i, point)
        if key not in self._predictions:
            inst = self.corpus.instances[i]
            cands = self.candidates(i, point[0])
            if self.kind == PredictorKind.CRF_FELA:
                model = inst.model.with_temperature(point[2])
                result = crf_fela_predict(model, cands, self.loss, marginals=self.unconstrained(i, point[2]))
            else:
                posteriors = self.posteriors(i, point) if self._needs_posteriors() else None
                result = predict(
                    inst.model, cands, self.config(point), self.settings, self.method, posteriors=posteriors
                )
            self._predictions[key] = result.chosen
        return self._predictions[key]

    def unconstrained(self, i: int, T: float) -> Marginals:
        key = (i, T)
        if key not in self._unconstrained:
            model = self.corpus.instances[i].model.with_temperature(T)
            self._unconstrained[key] = InferenceFactory.create(model, self.method, self.settings).marginals(model)
        return self._unconstrained[key]

    def marginals(self, i: int, point: GridPoint) -> Marginals:
        if self.kind == PredictorKind.CRF_FELA:
            return self.unconstrained(i, point[2])
        return mixture_marginals(self.candidates(i, point[0]), self.posteriors(i, point))

    def log_prob(self, i: int, point: GridPoint) -> float:
        key = (i, point)
        if key not in self._log_probs:
            per_class = log_prob_objective(
                self.marginals(i, point), self.corpus.instances[i].ground_truth, self.corpus.num_classes
            )
            self._log_probs[key] = float(np.mean(list(per_class.values())))
        return self._log_probs[key]

    def corpus_loss(self, indices: Sequence[int], point: GridPoint) -> float:
        """1 - corpus IOU for IOU losses, mean instance loss for Hamming."""
        pairs = [(self.corpus.instances[i].ground_truth, self.prediction(i, point)) for i in indices]
        if self.loss.name == LossName.IOU:
            accuracy, _ = corpus_iou(pairs, self.loss.num_classes)
            return 1.0 - accuracy
        return float(np.mean([hamming_loss(y, yhat) for y, yhat in pairs]))

    def performance(self, indices: Sequence[int], point: GridPoint, objective: TuneObjective) -> float:
        if objective == TuneObjective.BDT:
            return float(np.mean([self.log_prob(i, point) for i in indices]))
        return 1.0 - self.corpus_loss(indices, point)


def evaluate_corpus(
    corpus: Corpus,
    config: PredictorConfig,
    lam: float,
    num_candidates: int = 10,
    settings: Optional[BPSettings] = None,
    method: InferenceMethod = InferenceMethod.AUTO,
    solver: SolverName = SolverName.AUTO,
) -> float:
    """
    Corpus-level evaluation of one predictor configuration.

    Returns:
        corpus IOU accuracy for IOU losses (higher is better), mean instance
        Hamming loss otherwise (lower is better)
    """
    evaluator = CorpusEvaluator(corpus, config.kind, config.loss, num_candidates, settings, method, solver)
    point = (float(lam), float(config.radius_fraction), float(config.temperature))
    loss = evaluator.corpus_loss(range(len(corpus)), point)
    if config.loss.name == LossName.IOU:
        return 1.0 - loss
    return loss


def fold_partitions(num_instances: int, plan: CVPlan, permutation: int = 0) -> List[np.ndarray]:
    """Disjoint, covering folds; deterministic in (plan.seed, permutation)."""
    if plan.mode == CVMode.LEAVE_ONE_OUT:
        return [np.array([i]) for i in range(num_instances)]
    if plan.folds > num_instances:
        raise ValueError(f"{plan.folds} folds need at least as many instances, got {num_instances}")
    order = np.random.default_rng([plan.seed, permutation]).permutation(num_instances)
    return [np.sort(fold) for fold in np.array_split(order, plan.folds)]


@dataclass
class TuneResult:
    best: GridPoint
    config: PredictorConfig
    objective: TuneObjective
    report: pd.DataFrame
    # (permutation, fold, grid point chosen on the held-in part)
    fold_selections: List[Tuple[int, int, GridPoint]] = field(default_factory=list)

    @property
    def lam(self) -> float:
        return self.best[0]


def grid_search(
    corpus: Corpus,
    grid: ParameterGrid,
    plan: CVPlan,
    kind: PredictorKind = PredictorKind.C3RF_FELA,
    loss: Optional[LossKind] = None,
    objective: TuneObjective = TuneObjective.ERM,
    num_candidates: int = 10,
    settings: Optional[BPSettings] = None,
    method: InferenceMethod = InferenceMethod.AUTO,
    solver: SolverName = SolverName.AUTO,
    pin_temperature: Optional[float] = None,
) -> TuneResult:
    """
    Cross-validated grid search.

    Each (permutation, fold) picks the grid point with the best held-in score
    and records held-out scores for every point. The final choice is the
    point with the best mean held-out score; ties go to the smallest
    (lambda, rho, T).
    """
    if pin_temperature is not None:
        grid = ParameterGrid(grid.lambdas, grid.radius_fractions, (float(pin_temperature),))
    evaluator = CorpusEvaluator(corpus, kind, loss, num_candidates, settings, method, solver)
    points = grid.points()
    everyone = np.arange(len(corpus))
    rows = []
    selections = []
    for p in range(plan.permutations):
        for f, held_out in enumerate(fold_partitions(len(corpus), plan, p)):
            held_in = np.setdiff1d(everyone, held_out)
            best_point, best_score = None, -np.inf
            for point in points:
                heldin = evaluator.performance(held_in, point, objective) if held_in.size else np.nan
                heldout = evaluator.performance(held_out, point, objective)
                rows.append((p, f) + point + (heldin, heldout))
                if best_point is None or heldin > best_score:
                    best_point, best_score = point, heldin
            selections.append((p, f, best_point))
            logger.debug("Permutation %d fold %d selects %s", p, f, best_point)

    report = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    means = report.groupby(["lambda", "rho", "T"], sort=True)["heldout_score"].mean()
    best = tuple(float(v) for v in means.idxmax())
    logger.info("Selected lambda=%g rho=%g T=%g (mean held-out %.6g)", *best, means.max())
    return TuneResult(best, evaluator.config(best), TuneObjective(objective), report, selections)


def grid_search_erm(corpus: Corpus, grid: ParameterGrid, plan: CVPlan, kind: PredictorKind, **kwargs) -> TuneResult:
    return grid_search(corpus, grid, plan, kind, objective=TuneObjective.ERM, **kwargs)


def grid_search_bdt(corpus: Corpus, grid: ParameterGrid, plan: CVPlan, kind: PredictorKind = PredictorKind.C3RF_FELA, **kwargs) -> TuneResult:
    return grid_search(corpus, grid, plan, kind, objective=TuneObjective.BDT, **kwargs)

"""/c3rf/src/c3rf/experiments.py
Desk-scale studies: synthetic corpora, Bethe-vs-sampling mass errors,
mass/score rank correlations, marginal sweeps and predictor comparisons.

Each study returns a pandas DataFrame whose row order is fixed by its loop
order, never by execution order.
"""
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.stats import rankdata

from .candidates import CandidateSet, divmbest
from .constants import DEFAULT_POTENTIAL_LOW, DEFAULT_SAMPLE_COUNTS
from .core.dtypes import InferenceMethod, LossName, PredictorKind, SolverName
from .core.errors import C3RFError
from .core.graph import GibbsModel, gen_grid
from .core.types import BPSettings, LossKind, Marginals, PredictorConfig
from .corpus import Corpus, Instance
from .factory import InferenceFactory
from .hamming.ball import HammingBall, radius_from_fraction
from .hamming.constrained import constrained_posterior, exact_constrained_oracle
from .hamming.sampling import sample_mass_uniform_ball
from .inference.exact import sample_exact
from .loss import corpus_iou, hamming_loss
from .predict import c3rf_marginals, candidate_posteriors, predict

logger = logging.getLogger(__name__)

DEGENERATE = "degenerate"


def gen_corpus(
    num_instances: int,
    N: int,
    num_labels: int = 2,
    seed: int = 0,
    potential_low: float = DEFAULT_POTENTIAL_LOW,
) -> Corpus:
    """
    Synthetic corpus of random grids.

    Each ground truth is an exact sample from its own model's Gibbs
    distribution, so the models are well specified.
    """
    if num_instances < 1:
        raise ValueError(f"num_instances must be >= 1, got {num_instances}")
    rng = np.random.default_rng(seed)
    instances = []
    for i in range(num_instances):
        grid_seed, truth_seed = (int(s) for s in rng.integers(0, 2 ** 31 - 1, size=2))
        model = gen_grid(N, grid_seed, potential_low, num_labels)
        truth = sample_exact(model, 1, truth_seed)[0]
        instances.append(Instance(model, truth, None, f"grid{N}_{i:03d}"))
    logger.info("Generated %d %dx%d instances with %d labels", num_instances, N, N, num_labels)
    return Corpus(instances, num_labels)


def sweep_radius(N: int, rng: np.random.Generator) -> int:
    """Integer radius uniform in {1, ..., ceil(sqrt(N))}, at most N * N."""
    top = min(int(math.ceil(math.sqrt(N))), N * N)
    return int(rng.integers(1, top + 1))


def sweep_bethe(
    sizes: Sequence[int],
    runs: int = 10,
    sample_counts: Sequence[int] = DEFAULT_SAMPLE_COUNTS,
    seed: int = 0,
    potential_low: float = DEFAULT_POTENTIAL_LOW,
    settings: Optional[BPSettings] = None,
) -> pd.DataFrame:
    """
    Absolute log-mass errors of the Bethe estimate and of uniform ball sampling.

    One row per (N, run, estimator, sample count) against the enumeration
    oracle. Failures are kept as rows with a non-"ok" status.
    """
    rows = []
    for N in sizes:
        for run in range(runs):
            rng = np.random.default_rng([seed, N, run])
            grid_seed = int(rng.integers(0, 2 ** 31 - 1))
            model = gen_grid(N, grid_seed, potential_low)
            radius = sweep_radius(N, rng)
            ball = HammingBall(rng.integers(0, 2, size=N * N), radius)
            exact = exact_constrained_oracle(model, ball).log_mass
            base = {"N": N, "run": run, "seed": grid_seed, "radius": radius, "exact": exact}

            estimates: List[Tuple[str, int, float, str]] = []
            try:
                post = constrained_posterior(model, ball, settings)
                estimates.append(("bethe", 0, post.log_mass, "ok" if post.converged else "not_converged"))
            except C3RFError as exc:
                estimates.append(("bethe", 0, math.inf, type(exc).__name__))
            for s in sample_counts:
                value = sample_mass_uniform_ball(model, ball, s, int(rng.integers(0, 2 ** 31 - 1)))
                estimates.append(("sampling", int(s), value, "ok"))

            for estimator, samples, value, status in estimates:
                rows.append(dict(
                    base, estimator=estimator, samples=samples, estimate=value,
                    abs_error=abs(value - exact), status=status,
                ))
    return pd.DataFrame(rows, columns=[
        "N", "run", "seed", "radius", "estimator", "samples", "exact", "estimate", "abs_error", "status",
    ])


def summarize_sweep(df: pd.DataFrame) -> pd.DataFrame:
    """Mean absolute error per (N, estimator, sample count)."""
    return (
        df.groupby(["N", "estimator", "samples"], sort=True)["abs_error"]
        .mean()
        .reset_index()
        .rename(columns={"abs_error": "mean_abs_error"})
    )


def spearman(x: Sequence[float], y: Sequence[float]) -> Optional[float]:
    """
    Spearman correlation with average ranks for ties.

    Returns None when either side has no rank variance.
    """
    rx = rankdata(x, method="average")
    ry = rankdata(y, method="average")
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    sxx, syy = float(np.dot(dx, dx)), float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        return None
    return float(np.clip(np.dot(dx, dy) / math.sqrt(sxx * syy), -1.0, 1.0))


def _candidates(inst: Instance, M: int, lam: float, solver: SolverName, settings: Optional[BPSettings]) -> CandidateSet:
    if inst.candidates is not None:
        return inst.candidates.truncate(M)
    return divmbest(inst.model, M, lam, solver, settings)


def rank_correlation(
    corpus: Corpus,
    radius_fractions: Sequence[float],
    temperatures: Sequence[float],
    M: int = 10,
    lam: float = 0.5,
    settings: Optional[BPSettings] = None,
    method: InferenceMethod = InferenceMethod.AUTO,
    solver: SolverName = SolverName.AUTO,
) -> pd.DataFrame:
    """Per instance and (rho, T): Spearman correlation of candidate log-masses with scores."""
    rows = []
    for i, inst in enumerate(corpus):
        cands = _candidates(inst, M, lam, solver, settings)
        for rho in radius_fractions:
            for T in temperatures:
                model = inst.model.with_temperature(T)
                radius = radius_from_fraction(rho, model.num_variables)
                row = {"instance": i, "name": inst.name, "rho": rho, "T": T, "M": len(cands)}
                try:
                    strategy = InferenceFactory.create(model, method, settings)
                    posts = candidate_posteriors(model, cands, radius, strategy)
                    rho_s = spearman([p.log_mass for p in posts], cands.scores)
                    row.update(spearman=rho_s, status="ok" if rho_s is not None else DEGENERATE)
                except C3RFError as exc:
                    row.update(spearman=None, status=type(exc).__name__)
                rows.append(row)
    return pd.DataFrame(rows, columns=["instance", "name", "rho", "T", "M", "spearman", "status"])


def marginals_frame(marginals: Marginals) -> pd.DataFrame:
    """Rows are variables, columns are labels; short rows are padded with 0."""
    width = max(len(vec) for vec in marginals.node)
    table = np.zeros((len(marginals.node), width))
    for i, vec in enumerate(marginals.node):
        table[i, :len(vec)] = vec
    return pd.DataFrame(table, columns=[f"label_{k}" for k in range(width)])


def export_marginals(
    model: GibbsModel,
    cands: CandidateSet,
    radius_fractions: Sequence[float],
    temperatures: Sequence[float],
    settings: Optional[BPSettings] = None,
    method: InferenceMethod = InferenceMethod.AUTO,
) -> Dict[Tuple[float, float], pd.DataFrame]:
    """Mass-averaged marginals per (rho, T); rho = 0 and rho = 1 are always included."""
    rhos = sorted({0.0, 1.0} | {float(r) for r in radius_fractions})
    out = {}
    for rho in rhos:
        for T in temperatures:
            tempered = model.with_temperature(T)
            strategy = InferenceFactory.create(tempered, method, settings)
            radius = radius_from_fraction(rho, tempered.num_variables)
            out[(rho, float(T))] = marginals_frame(c3rf_marginals(tempered, cands, radius, strategy))
    return out


def compare_predictors(
    corpus: Corpus,
    kinds: Sequence[PredictorKind],
    Ms: Sequence[int],
    lam: float,
    rho: float,
    T: float,
    loss: Optional[LossKind] = None,
    settings: Optional[BPSettings] = None,
    method: InferenceMethod = InferenceMethod.AUTO,
    solver: SolverName = SolverName.AUTO,
) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """
    Performance against the number of candidates, and classwise IOU.

    Candidates are generated once at the largest M and truncated, since a
    DivMBest prefix is itself a DivMBest set.

    Returns:
        (curves with columns M, kind, loss, accuracy;
         classwise IOU at the largest M with columns kind, class, iou)
    """
    loss = loss or LossKind(LossName.HAMMING, corpus.num_classes)
    Ms = sorted(set(int(m) for m in Ms))
    full = [_candidates(inst, Ms[-1], lam, solver, settings) for inst in corpus]
    curve_rows, class_rows = [], []
    for kind in kinds:
        kind = PredictorKind(kind)
        config = PredictorConfig(kind, rho, T, loss)
        for M in Ms:
            pairs = []
            for inst, cands in zip(corpus, full):
                chosen = predict(inst.model, cands.truncate(M), config, settings, method).chosen
                pairs.append((inst.ground_truth, chosen))
            accuracy, per_class = corpus_iou(pairs, corpus.num_classes)
            if loss.name == LossName.HAMMING:
                accuracy = 1.0 - float(np.mean([hamming_loss(y, yhat) for y, yhat in pairs]))
            curve_rows.append({"M": M, "kind": kind.value, "loss": loss.name.value, "accuracy": accuracy})
            if M == Ms[-1]:
                for k, value in enumerate(per_class):
                    if not np.isnan(value):
                        class_rows.append({"kind": kind.value, "class": k, "iou": float(value)})
    return (
        pd.DataFrame(curve_rows, columns=["M", "kind", "loss", "accuracy"]),
        pd.DataFrame(class_rows, columns=["kind", "class", "iou"]),
    )

"""/c3rf/src/c3rf/candidates.py
Diverse candidate generation (DivMBest) and candidate-set curation.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Iterator, List, Optional

import numpy as np

from .constants import ENUMERATION_CAP
from .core.dtypes import SolverName
from .core.errors import EmptyCandidateSet
from .core.graph import Configuration, GibbsModel, GraphBuilder, as_configuration, score
from .core.types import BPSettings
from .inference.bp import map_maxproduct
from .inference.exact import map_exhaustive

logger = logging.getLogger(__name__)

# Relative tolerance for recorded vs recomputed scores
SCORE_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Candidate:
    configuration: Configuration
    score: float
    weight: float = 1.0

    def __post_init__(self) -> None:
        config = np.asarray(self.configuration, dtype=np.int64).copy()
        config.setflags(write=False)
        object.__setattr__(self, "configuration", config)
        if not self.weight > 0:
            raise ValueError(f"Candidate weight must be > 0, got {self.weight}")

    @property
    def key(self) -> bytes:
        return self.configuration.tobytes()


@dataclass
class CandidateSet:
    """
    Ordered candidate solutions with scores and multiplicity weights.

    Duplicates are allowed. `lam` is the diversity strength that produced the
    set; `heuristic_map` marks sets built with a non-exact MAP solver.
    """
    items: List[Candidate] = field(default_factory=list)
    lam: float = 0.0
    solver: SolverName = SolverName.EXHAUSTIVE
    heuristic_map: bool = False

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[Candidate]:
        return iter(self.items)

    def __getitem__(self, index: int) -> Candidate:
        return self.items[index]

    def require_nonempty(self) -> "CandidateSet":
        if not self.items:
            raise EmptyCandidateSet("The candidate set is empty")
        return self

    @property
    def configurations(self) -> np.ndarray:
        return np.stack([c.configuration for c in self.items])

    @property
    def scores(self) -> np.ndarray:
        return np.array([c.score for c in self.items], dtype=float)

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.items], dtype=float)

    def truncate(self, size: int) -> "CandidateSet":
        """The first `size` candidates (DivMBest prefixes are DivMBest sets)."""
        return replace(self, items=list(self.items[:size]))

    def verify(self, model: GibbsModel) -> "CandidateSet":
        """
        Recompute scores against a model.

        Mismatching recorded scores are logged and replaced.
        """
        items = []
        for m, cand in enumerate(self.items):
            config = as_configuration(model.graph, cand.configuration)
            actual = score(model, config)
            if not np.isclose(actual, cand.score, rtol=SCORE_TOLERANCE, atol=SCORE_TOLERANCE):
                logger.warning(
                    "Candidate %d: recorded score %r differs from model score %r", m, cand.score, actual
                )
            items.append(Candidate(config, actual, cand.weight))
        return replace(self, items=items)


def _resolve_solver(model: GibbsModel, solver: SolverName, cap: int) -> SolverName:
    if solver != SolverName.AUTO:
        return solver
    if model.graph.num_configurations() <= cap:
        return SolverName.EXHAUSTIVE
    return SolverName.MAXPRODUCT


def diversity_augmented(model: GibbsModel, previous: List[Configuration], lam: float) -> GibbsModel:
    """
    Model scoring S(y) + lam * sum_m Hamming(y, y^m).

    Hamming diversity splits per variable, so it enters as one extra unary
    factor per variable holding lam * #{m : y^m_i != k}.
    """
    builder = GraphBuilder.from_graph(model.graph)
    for i, k in enumerate(model.graph.cardinalities):
        bonus = np.zeros(int(k))
        for prev in previous:
            bonus += lam * (np.arange(int(k)) != prev[i])
        builder.add_factor([i], bonus)
    return GibbsModel(builder.build(), model.temperature)


def divmbest(
    model: GibbsModel,
    M: int,
    lam: float,
    solver: SolverName = SolverName.AUTO,
    settings: Optional[BPSettings] = None,
    cap: int = ENUMERATION_CAP,
) -> CandidateSet:
    """
    M diverse solutions: the MAP, then maximizers of the diversity-augmented score.

    Args:
        model: the CRF
        M: number of candidates
        lam: diversity strength
        solver: exhaustive (exact, lexicographic tie-break), maxproduct or auto
        settings: BP settings for the max-product solver
        cap: enumeration cap for the exhaustive solver

    Returns:
        CandidateSet whose recorded scores are the unaugmented S(y^m)
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    solver = _resolve_solver(model, solver, cap)
    if solver == SolverName.EXHAUSTIVE:
        def solve(m: GibbsModel) -> Configuration:
            return map_exhaustive(m, cap)
    else:
        def solve(m: GibbsModel) -> Configuration:
            return map_maxproduct(m, settings)

    found: List[Configuration] = []
    for m in range(M):
        if m == 0 or lam == 0:
            y = found[0] if found else solve(model)
        else:
            y = solve(diversity_augmented(model, found, lam))
        found.append(y)
        logger.debug("DivMBest candidate %d: %s", m, y.tolist())
    items = [Candidate(y, score(model, y)) for y in found]
    return CandidateSet(items, float(lam), solver, solver == SolverName.MAXPRODUCT)


def first_unique(cands: CandidateSet, target: int) -> CandidateSet:
    """
    Keep first occurrences until `target` distinct candidates are found.

    When the set holds fewer distinct candidates than `target`, every distinct
    candidate is kept once with the weights of all its occurrences summed.
    """
    if target < 1:
        raise ValueError(f"target must be >= 1, got {target}")
    order: List[bytes] = []
    first: Dict[bytes, Candidate] = {}
    total: Dict[bytes, float] = {}
    for cand in cands:
        if cand.key not in first:
            order.append(cand.key)
            first[cand.key] = cand
            total[cand.key] = 0.0
        total[cand.key] += cand.weight
    if len(order) >= target:
        items = [first[key] for key in order[:target]]
    else:
        items = [replace(first[key], weight=total[key]) for key in order]
    return replace(cands, items=items)

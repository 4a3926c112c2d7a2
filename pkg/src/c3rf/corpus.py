"""/c3rf/src/c3rf/corpus.py
Evaluation corpora: models paired with ground truths and, optionally,
precomputed candidate sets.
"""
from dataclasses import dataclass, field
from typing import Iterator, List, Optional

from .candidates import CandidateSet
from .core.graph import Configuration, GibbsModel, as_configuration


@dataclass(frozen=True, eq=False)
class Instance:
    model: GibbsModel
    ground_truth: Configuration
    candidates: Optional[CandidateSet] = None
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "ground_truth", as_configuration(self.model.graph, self.ground_truth))


@dataclass
class Corpus:
    """Instances sharing one label set of `num_classes` classes."""
    instances: List[Instance] = field(default_factory=list)
    num_classes: int = 2

    def __post_init__(self) -> None:
        if self.num_classes < 2:
            raise ValueError(f"num_classes must be >= 2, got {self.num_classes}")

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self) -> Iterator[Instance]:
        return iter(self.instances)

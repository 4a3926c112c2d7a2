# src/c3rf/formats/documents.py
"""Readers and Writers for the result documents: candidate sets, marginals,
constrained posteriors, predictions and corpora.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..candidates import Candidate, CandidateSet
from ..core.base import BaseReader, BaseWriter, decode_float, decode_floats, require
from ..core.dtypes import SolverName
from ..core.errors import ParseError
from ..core.graph import as_configuration
from ..core.types import Marginals
from ..corpus import Corpus, Instance
from ..hamming.ball import HammingBall
from ..hamming.constrained import ConstrainedPosterior
from .graph import GraphReader, GraphWriter


def _labels(values: Any) -> np.ndarray:
    if not isinstance(values, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise ParseError(f"Expected a list of integer labels, got {values!r}")
    return np.array(values, dtype=np.int64)


class CandidatesWriter(BaseWriter):
    kind = "candidates"

    def to_document(self, cands: CandidateSet) -> Dict[str, Any]:
        return {
            "lambda": cands.lam,
            "solver": cands.solver,
            "heuristic_map": cands.heuristic_map,
            "candidates": [
                {"labels": c.configuration, "score": c.score, "weight": c.weight}
                for c in cands
            ],
        }


class CandidatesReader(BaseReader):
    """Candidate sets load without a model; use CandidateSet.verify to check scores."""

    kind = "candidates"

    def from_document(self, doc: Dict[str, Any]) -> CandidateSet:
        try:
            solver = SolverName(doc.get("solver", SolverName.EXHAUSTIVE.value))
        except ValueError as exc:
            raise ParseError(f"Unknown solver: {doc.get('solver')!r}") from exc
        items = []
        for entry in require(doc, "candidates"):
            weight = decode_float(entry.get("weight", 1.0))
            if not weight > 0:
                raise ParseError(f"Candidate weight must be > 0, got {weight}")
            items.append(Candidate(_labels(require(entry, "labels")), decode_float(require(entry, "score")), weight))
        return CandidateSet(
            items,
            decode_float(doc.get("lambda", 0.0)),
            solver,
            bool(doc.get("heuristic_map", False)),
        )


class MarginalsWriter(BaseWriter):
    """Node marginals plus the log-partition estimate that came with them."""

    kind = "marginals"

    def __init__(self, log_z: Optional[float] = None, method: str = ""):
        self.log_z = log_z
        self.method = method

    def to_document(self, marginals: Marginals) -> Dict[str, Any]:
        doc = {"method": self.method, "log_z": self.log_z}
        doc.update(marginals.to_dict())
        return doc


class MarginalsReader(BaseReader):
    kind = "marginals"

    def from_document(self, doc: Dict[str, Any]) -> Tuple[Marginals, Optional[float]]:
        node = [decode_floats(vec) for vec in require(doc, "node")]
        log_z = doc.get("log_z")
        marginals = Marginals(
            node=node,
            converged=bool(doc.get("converged", True)),
            iterations=int(doc.get("iterations", 0)),
        )
        return marginals, None if log_z is None else decode_float(log_z)


class PosteriorWriter(BaseWriter):
    """One ConstrainedPosterior per ball."""

    kind = "posterior"

    def to_document(self, results: Sequence[Tuple[HammingBall, ConstrainedPosterior]]) -> Dict[str, Any]:
        entries = []
        for ball, post in results:
            entry: Dict[str, Any] = {"center": ball.center, "radius": ball.radius}
            entry.update(post.to_dict())
            entries.append(entry)
        return {"posteriors": entries}


class PosteriorReader(BaseReader):
    kind = "posterior"

    def from_document(self, doc: Dict[str, Any]) -> List[Tuple[HammingBall, ConstrainedPosterior]]:
        out = []
        for entry in require(doc, "posteriors"):
            ball = HammingBall(_labels(require(entry, "center")), int(require(entry, "radius")))
            post = ConstrainedPosterior(
                decode_float(require(entry, "log_mass")),
                [decode_floats(vec) for vec in require(entry, "marginals")],
                bool(entry.get("converged", True)),
            )
            out.append((ball, post))
        return out


class PredictionWriter(BaseWriter):
    """Writes anything exposing to_dict(), i.e. a predict.Prediction."""

    kind = "prediction"

    def to_document(self, prediction: Any) -> Dict[str, Any]:
        return prediction.to_dict()


class CorpusWriter(BaseWriter):
    """Corpus documents embed each instance's graph and ground truth."""

    kind = "corpus"

    def to_document(self, corpus: Corpus) -> Dict[str, Any]:
        graphs = GraphWriter()
        cand_writer = CandidatesWriter()
        instances = []
        for inst in corpus.instances:
            entry: Dict[str, Any] = {
                "name": inst.name,
                "graph": graphs.to_document(inst.model),
                "ground_truth": inst.ground_truth,
            }
            if inst.candidates is not None:
                entry["candidates"] = cand_writer.to_document(inst.candidates)
            instances.append(entry)
        return {"num_classes": corpus.num_classes, "instances": instances}


class CorpusReader(BaseReader):
    kind = "corpus"

    def from_document(self, doc: Dict[str, Any]) -> Corpus:
        graphs = GraphReader()
        cand_reader = CandidatesReader()
        instances = []
        for entry in require(doc, "instances"):
            model = graphs.from_document(require(entry, "graph"))
            truth = as_configuration(model.graph, _labels(require(entry, "ground_truth")))
            cands = None
            if "candidates" in entry:
                cands = cand_reader.from_document(entry["candidates"]).verify(model)
            instances.append(Instance(model, truth, cands, str(entry.get("name", ""))))
        return Corpus(instances, int(require(doc, "num_classes")))

# src/c3rf/__init__.py
from .candidates import Candidate, CandidateSet, divmbest
from .core.dtypes import CVMode, InferenceMethod, LossName, PredictorKind, SolverName, TuneObjective
from .core.graph import GibbsModel, GraphBuilder, gen_grid, score
from .core.types import BPSettings, CVPlan, LossKind, Marginals, ParameterGrid, PredictorConfig
from .corpus import Corpus, Instance
from .factory import FormatFactory, InferenceFactory
from .hamming import HammingBall, constrained_posterior
from .predict import Prediction, predict
from .tune import grid_search


def read_graph(path):
    """Read a graph from a JSON graph document or a UAI file."""
    return FormatFactory.read_graph(path)


def write_graph(model, path):
    """Write a graph, as UAI when the path ends in .uai and as JSON otherwise."""
    with open(path, 'w') as f:
        FormatFactory.create_writer(path).write(model, f)


__all__ = [
    'read_graph', 'write_graph',
    'Candidate', 'CandidateSet', 'divmbest',
    'CVMode', 'InferenceMethod', 'LossName', 'PredictorKind', 'SolverName', 'TuneObjective',
    'GibbsModel', 'GraphBuilder', 'gen_grid', 'score',
    'BPSettings', 'CVPlan', 'LossKind', 'Marginals', 'ParameterGrid', 'PredictorConfig',
    'Corpus', 'Instance', 'FormatFactory', 'InferenceFactory',
    'HammingBall', 'constrained_posterior', 'Prediction', 'predict', 'grid_search',
]

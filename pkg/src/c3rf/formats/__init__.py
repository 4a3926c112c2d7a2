from .documents import (
    CandidatesReader,
    CandidatesWriter,
    CorpusReader,
    CorpusWriter,
    MarginalsReader,
    MarginalsWriter,
    PosteriorReader,
    PosteriorWriter,
    PredictionWriter,
)
from .graph import GraphReader, GraphWriter
from .tabular import read_table, table_to_string, write_table
from .uai import UAIReader, UAIWriter

__all__ = [
    'CandidatesReader', 'CandidatesWriter', 'CorpusReader', 'CorpusWriter',
    'MarginalsReader', 'MarginalsWriter', 'PosteriorReader', 'PosteriorWriter',
    'PredictionWriter', 'GraphReader', 'GraphWriter', 'UAIReader', 'UAIWriter',
    'read_table', 'table_to_string', 'write_table',
]

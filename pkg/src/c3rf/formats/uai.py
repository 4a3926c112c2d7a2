# src/c3rf/formats/uai.py
"""Reader and Writer for UAI model files (MARKOV and BAYES).

UAI tables hold nonnegative potentials, not log-potentials: they are
imported through log (0 becomes -inf) and exported through exp.
"""

import re
from typing import Iterator, List, TextIO

import numpy as np

from ..core.errors import ParseError
from ..core.graph import FactorSpec, GibbsModel, VariableSpec, build_graph

UAI_TYPES = ("MARKOV", "BAYES")


def _tokens(text: str) -> Iterator[str]:
    for line in text.splitlines():
        for token in re.split(r"[\s(),]+", line):
            if token:
                yield token


class UAIReader:
    """Reader for UAI text files."""

    def loads(self, text: str) -> GibbsModel:
        gen = _tokens(text)
        try:
            kind = next(gen)
            if kind not in UAI_TYPES:
                raise ParseError("Invalid file format")
            n_var = int(next(gen))
            cards = [int(next(gen)) for _ in range(n_var)]
            n_factors = int(next(gen))
            scopes: List[List[int]] = []
            for _ in range(n_factors):
                size = int(next(gen))
                scopes.append([int(next(gen)) for _ in range(size)])
            tables = []
            for f in range(n_factors):
                size = int(next(gen))
                values = np.array([float(next(gen)) for _ in range(size)], dtype=float)
                if np.any(values < 0):
                    raise ParseError(f"Factor {f} has negative potentials")
                with np.errstate(divide="ignore"):
                    tables.append(np.log(values))
        except StopIteration as exc:
            raise ParseError("Unexpected end of UAI file") from exc
        except ValueError as exc:
            raise ParseError(f"Malformed UAI file: {exc}") from exc
        variables = [VariableSpec(i, k) for i, k in enumerate(cards)]
        factors = [FactorSpec(f, tuple(scope), table) for f, (scope, table) in enumerate(zip(scopes, tables))]
        return GibbsModel(build_graph(variables, factors))

    def read(self, file: TextIO) -> GibbsModel:
        return self.loads(file.read())


class UAIWriter:
    """Writer for UAI MARKOV files. Temperature is not stored."""

    def dumps(self, model: GibbsModel) -> str:
        graph = model.graph
        lines = ["MARKOV", str(graph.num_variables)]
        lines.append(" ".join(str(int(k)) for k in graph.cardinalities))
        lines.append(str(graph.num_factors))
        for factor in graph.factors:
            lines.append(" ".join(str(v) for v in (len(factor.scope),) + factor.scope))
        lines.append("")
        for factor in graph.factors:
            lines.append(str(factor.table.size))
            lines.append(" ".join(repr(float(v)) for v in np.exp(factor.table)))
            lines.append("")
        return "\n".join(lines)

    def write(self, model: GibbsModel, file: TextIO) -> None:
        file.write(self.dumps(model))

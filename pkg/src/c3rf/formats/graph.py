# src/c3rf/formats/graph.py
"""Reader and Writer for the JSON graph document.

A graph document lists variable cardinalities by position and factors as
{scope, log_table}, a flat row-major table of log-potentials, plus the
model temperature. Variable and factor ids are their list positions.
"""

from typing import Any, Dict, List

from ..constants import FORMAT_VERSION
from ..core.base import BaseReader, BaseWriter, decode_float, decode_floats, require
from ..core.errors import ParseError
from ..core.graph import FactorSpec, GibbsModel, VariableSpec, build_graph


def _int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"Expected an integer {what}, got {value!r}")
    return value


class GraphWriter(BaseWriter):
    """Writer for GibbsModel documents."""

    kind = "graph"

    def to_document(self, model: GibbsModel) -> Dict[str, Any]:
        graph = model.graph
        return {
            "temperature": model.temperature,
            "variables": [v.cardinality for v in graph.variables],
            "factors": [
                {"scope": list(f.scope), "log_table": f.table}
                for f in graph.factors
            ],
        }


class GraphReader(BaseReader):
    """Reader for GibbsModel documents; the graph is validated on load.

    Bare documents without the `format`/`version` tags are accepted as
    graphs of the current version.
    """

    kind = "graph"

    def read_header(self, doc: Any) -> int:
        if isinstance(doc, dict) and "format" not in doc and "version" not in doc:
            return FORMAT_VERSION
        return super().read_header(doc)

    def from_document(self, doc: Dict[str, Any]) -> GibbsModel:
        try:
            variables: List[VariableSpec] = [
                VariableSpec(i, _int(k, "cardinality"))
                for i, k in enumerate(require(doc, "variables"))
            ]
            factors: List[FactorSpec] = [
                FactorSpec(
                    f,
                    tuple(_int(v, "variable id") for v in require(entry, "scope")),
                    decode_floats(require(entry, "log_table")),
                )
                for f, entry in enumerate(require(doc, "factors"))
            ]
        except (TypeError, AttributeError) as exc:
            raise ParseError(f"Malformed graph document: {exc}") from exc
        temperature = decode_float(doc.get("temperature", 1.0))
        return GibbsModel(build_graph(variables, factors), temperature)

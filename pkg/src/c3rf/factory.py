"""/c3rf/src/c3rf/factory.py
Provide InferenceFactory to choose between enumeration and belief propagation,
and FormatFactory to choose between the JSON and UAI graph formats.
"""

import logging
from pathlib import Path
from typing import Optional, Union

from .constants import ENUMERATION_CAP
from .core.dtypes import InferenceMethod
from .core.graph import GibbsModel
from .core.types import BPSettings
from .formats.graph import GraphReader, GraphWriter
from .formats.uai import UAIReader, UAIWriter
from .inference.strategy import BeliefPropagationStrategy, ExactStrategy, InferenceStrategy

logger = logging.getLogger(__name__)

GraphReaderType = Union[GraphReader, UAIReader]
GraphWriterType = Union[GraphWriter, UAIWriter]


class InferenceFactory:
    @staticmethod
    def create(
        model: GibbsModel,
        method: InferenceMethod = InferenceMethod.AUTO,
        settings: Optional[BPSettings] = None,
        cap: int = ENUMERATION_CAP,
        saturation_cap: Optional[int] = None,
    ) -> InferenceStrategy:
        """
        Create the inference strategy for a model.

        `auto` enumerates when the original label space fits under `cap`
        and falls back to belief propagation otherwise.
        """
        method = InferenceMethod(method)
        exact = ExactStrategy(cap)
        if method == InferenceMethod.EXACT:
            return exact
        if method == InferenceMethod.AUTO and exact.can_run(model):
            return exact
        strategy = BeliefPropagationStrategy(settings, saturation_cap)
        logger.debug("Using belief propagation (estimated cost %d)", strategy.estimate_cost(model))
        return strategy


class FormatFactory:
    @staticmethod
    def create_reader(text: str) -> GraphReaderType:
        """Pick the graph reader by sniffing the first non-blank character."""
        return GraphReader() if text.lstrip().startswith("{") else UAIReader()

    @staticmethod
    def create_writer(path: Union[str, Path, None]) -> GraphWriterType:
        """UAI for *.uai paths, the JSON document otherwise."""
        if path is not None and Path(path).suffix.lower() == ".uai":
            return UAIWriter()
        return GraphWriter()

    @staticmethod
    def read_graph(path: Union[str, Path]) -> GibbsModel:
        text = Path(path).read_text()
        return FormatFactory.create_reader(text).loads(text)

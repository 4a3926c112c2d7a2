"""/c3rf/src/c3rf/core/base.py
Abstract classes for JSON document readers/writers.
Adds the format tag and FORMAT_VERSION to the top of every document.
"""

import json
import math
from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Dict, Mapping, Optional, TextIO

import numpy as np

from ..constants import FORMAT_VERSION, TOOL_NAME, TOOL_VERSION
from .errors import ParseError


def run_header(command: str, flags: Mapping[str, Any], seed: Optional[int] = None) -> Dict[str, Any]:
    """Provenance block written into every output: tool, version, command, flags, seed."""
    return {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "command": command,
        "flags": {key: encode_value(flags[key]) for key in sorted(flags)},
        "seed": seed,
    }


def encode_value(value: Any) -> Any:
    """
    Convert numpy values and non-finite floats into JSON-safe objects.

    -inf/inf become the strings "-inf"/"inf"; NaN is rejected.
    """
    if isinstance(value, dict):
        return {str(k): encode_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode_value(v) for v in value]
    if isinstance(value, np.ndarray):
        return encode_value(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            raise ValueError("NaN cannot be written to a document")
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, Enum):
        return value.value
    return value


def decode_float(value: Any) -> float:
    """Inverse of encode_value for one number."""
    if value == "-inf":
        return -math.inf
    if value == "inf":
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"Expected a number, got {value!r}")
    return float(value)


def decode_floats(values: Any) -> np.ndarray:
    if not isinstance(values, list):
        raise ParseError(f"Expected a list of numbers, got {type(values).__name__}")
    return np.array([decode_float(v) for v in values], dtype=float)


def require(doc: Mapping[str, Any], key: str) -> Any:
    """Fetch a mandatory document field."""
    if key not in doc:
        raise ParseError(f"Missing field: {key}")
    return doc[key]


class BaseWriter(ABC):
    """Abstract base class for document writers."""

    kind: str = ""

    @abstractmethod
    def to_document(self, obj: Any) -> Dict[str, Any]:
        """Body fields of the document (everything but the header)."""
        pass

    def write_header(self, header: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """The common document header."""
        doc: Dict[str, Any] = {"format": self.kind, "version": FORMAT_VERSION}
        if header is not None:
            doc["header"] = header
        return doc

    def dumps(self, obj: Any, header: Optional[Dict[str, Any]] = None) -> str:
        doc = self.write_header(header)
        doc.update(self.to_document(obj))
        return json.dumps(encode_value(doc), indent=2, allow_nan=False) + "\n"

    def write(self, obj: Any, file: TextIO, header: Optional[Dict[str, Any]] = None) -> None:
        """Write an object to an open text file."""
        file.write(self.dumps(obj, header))


class BaseReader(ABC):
    """Abstract base class for document readers."""

    kind: str = ""

    @abstractmethod
    def from_document(self, doc: Dict[str, Any]) -> Any:
        pass

    def read_header(self, doc: Any) -> int:
        """Validate the document header and return its version."""
        if not isinstance(doc, dict) or doc.get("format") != self.kind:
            raise ParseError("Invalid file format")
        version = doc.get("version")
        if version != FORMAT_VERSION:
            raise ParseError(f"Unsupported version: {version}")
        return version

    def loads(self, text: str) -> Any:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"Malformed JSON: {exc}") from exc
        self.read_header(doc)
        return self.from_document(doc)

    def read(self, file: TextIO) -> Any:
        """Read an object from an open text file."""
        return self.loads(file.read())

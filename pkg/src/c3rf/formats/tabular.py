# src/c3rf/formats/tabular.py
"""CSV experiment records.

Every file opens with a single `#` comment line carrying the run header,
followed by a pandas-written table. NaN cells are written empty.
"""

import json
from typing import Any, Dict, TextIO

import pandas as pd

from ..core.base import encode_value


def header_line(header: Dict[str, Any]) -> str:
    return "# " + json.dumps(encode_value(header), sort_keys=True, separators=(",", ":")) + "\n"


def write_table(df: pd.DataFrame, file: TextIO, header: Dict[str, Any]) -> None:
    """Write the header comment, then the table."""
    file.write(header_line(header))
    df.to_csv(file, index=False, lineterminator="\n", float_format="%.12g")


def table_to_string(df: pd.DataFrame, header: Dict[str, Any]) -> str:
    return header_line(header) + df.to_csv(index=False, lineterminator="\n", float_format="%.12g")


def read_table(file: TextIO) -> pd.DataFrame:
    """Read a table written by write_table; the header comment is skipped."""
    return pd.read_csv(file, comment="#")

"""Columnar CSV reading for the sweep artifacts.

Each reader returns a plain dict mapping column name to a float array.
Only the columns a plot actually uses are checked by the plot builders;
extra columns pass through untouched, so the readers stay schema-agnostic.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

__all__ = ["SchemaError", "read_columns"]


class SchemaError(ValueError):
    """Input CSV does not match the expected column layout."""


def read_columns(path: str | Path) -> dict[str, np.ndarray]:
    """Read a headered CSV into {column name: float array}.

    The sweep artifacts are numeric throughout, so every cell must parse
    as a float; "inf" and "nan" parse to the matching IEEE values. Raises
    SchemaError on empty files, ragged rows or non-numeric cells, and lets
    a missing file surface as FileNotFoundError.
    """
    path = Path(path)
    with path.open(newline="") as handle:
        rows = list(csv.DictReader(handle))
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    table: dict[str, np.ndarray] = {}
    for name in rows[0].keys():
        if name is None:
            raise SchemaError(f"{path}: row wider than the header")
        values = []
        # first data row is file line 2
        for line, row in enumerate(rows, start=2):
            text = row.get(name)
            if text is None or text == "":
                raise SchemaError(f"{path}: missing value for {name!r} on line {line}")
            try:
                values.append(float(text))
            except ValueError as exc:
                raise SchemaError(
                    f"{path}: column {name!r} has non-numeric value {text!r} on line {line}"
                ) from exc
        table[name] = np.asarray(values, dtype=float)
    return table

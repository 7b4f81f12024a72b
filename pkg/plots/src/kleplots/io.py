"""CSV loading with explicit schema checks.

Tables are returned as dicts of float64 column arrays. Missing columns
and empty tables raise :class:`SchemaError` naming the problem, so the
CLI can fail before any figure file is created.
"""

import csv

import numpy as np


class SchemaError(ValueError):
    """An input CSV does not match the documented schema."""


def read_table(path, required):
    """Read a CSV into ``{column: float array}``, validating columns.

    ``required`` is an iterable of column names that must be present.
    A header-only or empty file is rejected.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file")
        header = [h.strip() for h in header]
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
        rows = [r for r in reader if r]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    try:
        data = np.array(rows, dtype=np.float64)
    except ValueError:
        raise SchemaError(f"{path}: non-numeric cell")
    if data.shape[1] != len(header):
        raise SchemaError(f"{path}: ragged rows")
    return {name: data[:, i] for i, name in enumerate(header)}


def mode_columns(table):
    """Names of per-mode columns ``f_1, f_2, ...`` in ascending order."""
    names = [c for c in table if c.startswith("f_")]
    return sorted(names, key=lambda c: int(c.split("_")[1]))

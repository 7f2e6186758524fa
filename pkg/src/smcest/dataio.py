"""Reading and writing experiment data records.

A data record is a table of (counts, experiment value, n_shots) rows.
Three on-disk forms are supported:

- delimited text (CSV or whitespace), with an optional header row naming
  the columns;
- ``.npy`` holding the (n, 3) float array;
- ``.npz`` holding columnar arrays ``counts``, ``n_shots``, and the
  experiment field under its own name (``t``, ``m``, ...), for large
  records.
"""

import os

import numpy as np

from .exceptions import DataError

__all__ = ["load_data_records", "save_data_records"]

_COLUMN_ALIASES = ("t", "m", "x")


def _from_columnar(archive):
    names = set(archive.files)
    if "counts" not in names or "n_shots" not in names:
        raise DataError("columnar data needs 'counts' and 'n_shots' arrays")
    field = [n for n in archive.files if n in _COLUMN_ALIASES]
    if len(field) != 1:
        raise DataError(
            "columnar data needs exactly one experiment-field array "
            "named one of %s" % (_COLUMN_ALIASES,)
        )
    counts = np.asarray(archive["counts"], dtype=float)
    values = np.asarray(archive[field[0]], dtype=float)
    shots = np.asarray(archive["n_shots"], dtype=float)
    if not (len(counts) == len(values) == len(shots)):
        raise DataError("columnar arrays must have equal length")
    return np.column_stack([counts, values, shots])


def _from_text(path):
    with open(path, "r", encoding="utf-8") as handle:
        first = handle.readline()
    delimiter = "," if "," in first else None
    has_header = any(c.isalpha() for c in first)
    try:
        table = np.loadtxt(path, delimiter=delimiter,
                           skiprows=1 if has_header else 0, ndmin=2)
    except ValueError as err:
        raise DataError("could not parse data file %s: %s" % (path, err)) from err
    return table


def load_data_records(source):
    """Load a data record as an (n, 3) float array.

    ``source`` may be a path (text, .npy, or .npz) or anything array-like
    with three columns.  Row-level validation happens in the estimation
    entry points so errors carry row numbers.
    """
    if isinstance(source, (str, os.PathLike)):
        path = os.fspath(source)
        if path.endswith(".npz"):
            with np.load(path) as archive:
                table = _from_columnar(archive)
        elif path.endswith(".npy"):
            table = np.asarray(np.load(path), dtype=float)
        else:
            table = _from_text(path)
    else:
        table = np.asarray(source, dtype=float)
    table = np.atleast_2d(table)
    if table.ndim != 2 or (table.size and table.shape[1] != 3):
        raise DataError(
            "data records need exactly 3 columns "
            "(counts, experiment value, n_shots); got shape %s" % (table.shape,)
        )
    return table


def save_data_records(path, table, field_name="t"):
    """Write rows as CSV with a header; deterministic byte-for-byte."""
    table = np.atleast_2d(np.asarray(table, dtype=float))
    header = "counts,%s,n_shots" % field_name
    np.savetxt(path, table, delimiter=",", header=header, comments="",
               fmt="%.17g")

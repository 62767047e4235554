"""Matrix file formats.

Two formats are accepted: a JSON object {"n": int, "rows": [[entry, ...], ...]}
whose entries are numbers or exact rational strings such as "21/80", and plain
CSV of numbers.  Rational strings are parsed exactly (numerator/denominator)
before the single conversion to double.  "n" is optional and may be omitted for
rectangular score matrices; when present it must match the row count.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

import numpy as np

from .errors import MatrixParseError


def parse_entry(value) -> float:
    """Parse one matrix entry: a number, or a string like '21/80' or '0.25'."""
    if isinstance(value, bool):
        raise MatrixParseError(f"invalid matrix entry: {value!r}")
    if isinstance(value, (int, float)):
        x = float(value)
    elif isinstance(value, str):
        try:
            x = float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise MatrixParseError(f"invalid matrix entry: {value!r}") from exc
    else:
        raise MatrixParseError(f"invalid matrix entry: {value!r}")
    if not math.isfinite(x) or x < 0:
        raise MatrixParseError(f"matrix entries must be finite and nonnegative: {value!r}")
    return x


def read_raw_rows(text: str) -> tuple[int | None, list[list]]:
    """Split a matrix file into unparsed row entries; sniffs JSON vs CSV.

    Returns (declared_n, rows) where rows still hold the raw cell values so a
    downstream consumer can do the exact rational parsing itself.
    """
    stripped = text.lstrip()
    if not stripped:
        raise MatrixParseError("empty matrix input")
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatrixParseError(f"invalid JSON matrix: {exc}") from exc
        if not isinstance(obj, dict) or "rows" not in obj:
            raise MatrixParseError('JSON matrix must be an object with a "rows" key')
        rows = obj["rows"]
        n = obj.get("n")
        if n is not None and not isinstance(n, int):
            raise MatrixParseError('"n" must be an integer')
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise MatrixParseError('"rows" must be a list of lists')
        return n, rows
    reader = csv.reader(io.StringIO(text))
    rows = [[cell.strip() for cell in row] for row in reader if row and any(c.strip() for c in row)]
    return None, rows


def parse_rows(n: int | None, rows: list[list], square: bool = True) -> np.ndarray:
    """Validate raw rows into a float matrix."""
    if not rows:
        raise MatrixParseError("matrix has no rows")
    parsed = [[parse_entry(v) for v in row] for row in rows]
    width = len(parsed[0])
    if width < 1 or any(len(row) != width for row in parsed):
        raise MatrixParseError("matrix rows must be nonempty and of equal length")
    if n is not None and n != len(parsed):
        raise MatrixParseError(f'declared "n" = {n} does not match {len(parsed)} rows')
    if square and width != len(parsed):
        raise MatrixParseError(f"expected a square matrix, got {len(parsed)}x{width}")
    return np.array(parsed, dtype=float)


def loads_matrix(text: str, square: bool = True) -> np.ndarray:
    """Parse matrix file content (JSON or CSV) into a float matrix."""
    n, rows = read_raw_rows(text)
    return parse_rows(n, rows, square=square)


def load_matrix(path, square: bool = True) -> np.ndarray:
    """Read and parse a matrix file."""
    with open(path, "r", encoding="utf-8") as fh:
        return loads_matrix(fh.read(), square=square)


def matrix_to_jsonable(A: np.ndarray) -> dict:
    """Canonical JSON form of a matrix: {"n": n, "rows": [[floats]]}."""
    A = np.asarray(A, dtype=float)
    return {"n": int(A.shape[0]), "rows": [[float(v) for v in row] for row in A]}

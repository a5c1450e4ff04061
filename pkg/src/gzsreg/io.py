"""JSON I/O. Rationals travel as strings "p/q" (or "p") so no float ever enters."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .korbits import Flag
from .linalg import RationalMatrix


class MatrixFormatError(ValueError):
    pass


def parse_rational(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise MatrixFormatError(f"entries must be strings or integers, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise MatrixFormatError(f"entries must be strings or integers, got {value!r}")
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise MatrixFormatError(f"not a rational: {value!r}") from exc


def matrix_from_json(data) -> RationalMatrix:
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise MatrixFormatError("matrix must be a non-empty array of arrays")
    width = len(data[0])
    if width == 0 or any(len(r) != width for r in data):
        raise MatrixFormatError("ragged or empty rows")
    return RationalMatrix([[parse_rational(v) for v in row] for row in data])


def matrix_to_json(m: RationalMatrix) -> list[list[str]]:
    return [[str(v) for v in row] for row in m.rows()]


def load_json(path: str | Path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from exc


def read_matrix(path: str | Path) -> RationalMatrix:
    m = matrix_from_json(load_json(path))
    if m.nrows != m.ncols:
        raise MatrixFormatError(f"matrix is {m.nrows}x{m.ncols}, expected square")
    return m


def read_flag(path: str | Path) -> Flag:
    """A flag file holds the flag basis as matrix columns (column k spans the k-th step)."""
    m = read_matrix(path)
    if m.det() == 0:
        raise MatrixFormatError("flag basis is singular")
    return Flag(m)


def read_matrix_list(path: str | Path) -> list[RationalMatrix]:
    data = load_json(path)
    if not isinstance(data, list) or not data:
        raise MatrixFormatError("expected a non-empty array of matrices")
    mats = [matrix_from_json(d) for d in data]
    size = mats[0].nrows
    if any(m.shape != (size, size) for m in mats):
        raise MatrixFormatError("matrices of different shapes")
    return mats


def digest(payload) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=False, default=str)

"""Shared text formats: complex scalars as [re, im], matrices row-major, CSV grids."""
from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError


def real_to_json(x):
    """Rationals become "p/q" strings (exact), floats stay JSON numbers."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return float(x)


def real_from_json(x):
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational number: {x!r}") from exc
    if isinstance(x, bool):
        raise ParseError("boolean where a number was expected")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    raise ParseError(f"not a real number: {x!r}")


def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(v) -> complex:
    if isinstance(v, (int, float, str)):
        return complex(float(real_from_json(v)))
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise ParseError(f"complex number must be [re, im], got {v!r}")
    return complex(float(real_from_json(v[0])), float(real_from_json(v[1])))


def matrix_to_json(m) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return {"rows": m.shape[0], "cols": m.shape[1],
            "data": [complex_to_json(z) for z in m.ravel()]}


def matrix_from_json(d) -> np.ndarray:
    try:
        r, c, data = int(d["rows"]), int(d["cols"]), d["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("matrix needs rows, cols, data") from exc
    if len(data) != r * c:
        raise ParseError("matrix data length does not match its shape")
    return np.array([complex_from_json(z) for z in data], dtype=complex).reshape(r, c)


def dump_json(obj, path: str | Path | None = None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write a CSV grid; complex cells are split into ``name_re``/``name_im`` by the caller."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(list(header))
        for row in rows:
            w.writerow([_cell(x) for x in row])


def _cell(x):
    if isinstance(x, float) or isinstance(x, np.floating):
        return repr(float(x))
    return x


def complex_columns(name: str) -> list[str]:
    return [f"{name}_re", f"{name}_im"]

"""CSV and JSON readers/writers with fixed 17-digit float formatting."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .fourier_core import FourierSeries

__all__ = ["ParseError", "fmt", "write_csv", "read_series_csv", "write_series_csv",
           "read_samples_csv", "write_json"]


class ParseError(ValueError):
    """Malformed input file; the message names the offending line."""


def fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def _rows(path, expected: Sequence[str]):
    """Yield ``(line_number, floats)`` for every data row; the header is optional."""
    text = Path(path).read_text()
    if not text.strip():
        raise ParseError(f"{path}: empty input")
    seen = False
    for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in row]
        if not seen and [c.lower() for c in cells] == list(expected):
            seen = True
            continue
        seen = True
        if len(cells) != len(expected):
            raise ParseError(f"{path}:{lineno}: expected {len(expected)} columns "
                             f"({', '.join(expected)}), got {len(cells)}")
        try:
            vals = [float(c) for c in cells]
        except ValueError:
            raise ParseError(f"{path}:{lineno}: non-numeric value in {row!r}") from None
        if not all(math.isfinite(v) for v in vals):
            raise ParseError(f"{path}:{lineno}: non-finite value in {row!r}")
        yield lineno, vals


def read_series_csv(path) -> FourierSeries:
    """Read ``k,alpha,beta`` rows; the ``k = 0`` row carries ``alpha_0``."""
    coeffs = {}
    for lineno, (k, a, b) in _rows(path, ("k", "alpha", "beta")):
        if k != int(k) or k < 0:
            raise ParseError(f"{path}:{lineno}: k must be a non-negative integer, got {k}")
        if int(k) in coeffs:
            raise ParseError(f"{path}:{lineno}: duplicate k={int(k)}")
        coeffs[int(k)] = (a, b)
    if not coeffs:
        raise ParseError(f"{path}: no data rows")
    k_max = max(coeffs)
    a = np.zeros(k_max)
    b = np.zeros(k_max)
    for k, (ak, bk) in coeffs.items():
        if k:
            a[k - 1], b[k - 1] = ak, bk
    return FourierSeries(coeffs.get(0, (0.0, 0.0))[0], a, b)


def write_series_csv(path, s: FourierSeries):
    rows = [(0, s.half_mean, 0.0)]
    rows += [(k, a, b) for k, (a, b) in enumerate(zip(s.cos_coeffs, s.sin_coeffs), start=1)]
    write_csv(path, ("k", "alpha", "beta"), rows)


def read_samples_csv(path):
    """Read ``x,f`` rows on a uniform grid; returns ``(x, f)`` arrays."""
    data = [vals for _, vals in _rows(path, ("x", "f"))]
    if len(data) < 2:
        raise ParseError(f"{path}: need at least two samples")
    x, f = np.array(data).T
    d = np.diff(x)
    if np.any(d <= 0) or not np.allclose(d, d[0], rtol=1e-6, atol=0):
        raise ParseError(f"{path}: x must be strictly increasing and uniformly spaced")
    return x, f


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"cannot serialise {type(o).__name__}")

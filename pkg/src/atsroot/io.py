"""Readers and writers for the on-disk formats.

Matrix CSV: one row per line, comma separated decimals, no header.
Hypothesis JSON: ``{"H": [[...], ...], "y": [...]}``.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .reduction import Hypothesis


class FormatError(ValueError):
    """Malformed input file; the message names the file and line."""


def parse_matrix_csv(text: str, source: str = "<string>") -> NDArray[np.float64]:
    rows: list[list[float]] = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split(",")
        try:
            values = [float(f) for f in fields]
        except ValueError:
            raise FormatError(f"{source}:{lineno}: not a comma-separated list of numbers") from None
        if not all(np.isfinite(values)):
            raise FormatError(f"{source}:{lineno}: non-finite value")
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise FormatError(
                f"{source}:{lineno}: ragged row with {len(values)} fields, expected {width}"
            )
        rows.append(values)
    if not rows:
        raise FormatError(f"{source}: empty matrix file")
    return np.array(rows, dtype=np.float64)


def read_matrix_csv(path: str | Path) -> NDArray[np.float64]:
    path = Path(path)
    return parse_matrix_csv(path.read_text(), str(path))


def read_vector_csv(path: str | Path) -> NDArray[np.float64]:
    """A vector stored either as a single row or a single column."""
    m = read_matrix_csv(path)
    if 1 not in m.shape:
        raise FormatError(f"{path}: expected a single row or column, got {m.shape[0]}x{m.shape[1]}")
    return m.ravel()


def format_matrix_csv(a: ArrayLike) -> str:
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    return "".join(",".join(repr(float(v)) for v in row) + "\n" for row in a)


def write_matrix_csv(path: str | Path, a: ArrayLike) -> None:
    Path(path).write_text(format_matrix_csv(a))


def write_vector_csv(path: str | Path, v: ArrayLike) -> None:
    """One value per line so that an empty vector is an empty file."""
    v = np.asarray(v, dtype=np.float64).ravel()
    Path(path).write_text("".join(f"{float(x)!r}\n" for x in v))


def parse_hypothesis_json(text: str, source: str = "<string>") -> Hypothesis:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(obj, dict) or "H" not in obj:
        raise FormatError(f"{source}: expected an object with keys 'H' and 'y'")
    h = obj["H"]
    if not isinstance(h, list) or not h or not all(isinstance(r, list) for r in h):
        raise FormatError(f"{source}: 'H' must be a nonempty array of row arrays")
    widths = {len(r) for r in h}
    if len(widths) != 1 or 0 in widths:
        raise FormatError(f"{source}: 'H' rows are ragged or empty")
    try:
        hm = np.array(h, dtype=np.float64)
        y = np.zeros(len(h)) if obj.get("y") is None else np.array(obj["y"], dtype=np.float64)
    except (TypeError, ValueError):
        raise FormatError(f"{source}: 'H' and 'y' must contain numbers only") from None
    if y.ndim != 1 or y.shape[0] != hm.shape[0]:
        raise FormatError(f"{source}: 'y' must have length {hm.shape[0]} to match the rows of 'H'")
    if not (np.all(np.isfinite(hm)) and np.all(np.isfinite(y))):
        raise FormatError(f"{source}: non-finite value")
    return Hypothesis(hm, y)


def read_hypothesis(path: str | Path) -> Hypothesis:
    path = Path(path)
    return parse_hypothesis_json(path.read_text(), str(path))


def write_hypothesis(path: str | Path, h: Hypothesis) -> None:
    Path(path).write_text(json.dumps({"H": h.H.tolist(), "y": h.y.tolist()}) + "\n")


def write_csv_records(path: str | Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)

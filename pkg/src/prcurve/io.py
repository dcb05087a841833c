"""CSV readers and writers with stable number formatting.

Numbers are written with 9 significant digits (``%.9g``), a ``.`` decimal
separator and LF line endings, so that re-reading and re-writing a file
reproduces it byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .empirical import NEGATIVE_LABELS, POSITIVE_LABELS, EmpiricalSample, PRPointSet

__all__ = [
    "InputFileError",
    "fmt",
    "write_rows",
    "read_rows",
    "curve_rows",
    "point_set_rows",
    "read_scores_csv",
    "dump_json",
]

UNDEFINED = "undefined"


class InputFileError(ValueError):
    """A user-supplied file is malformed; the message carries the line number."""


def fmt(value) -> str:
    if value is None:
        return UNDEFINED
    v = float(value)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if v == 0.0:
        return "0"
    return f"{v:.9g}"


def write_rows(target, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Write ``rows`` under ``header``; ``target`` is a path, a text stream or ``None``.

    Returns the written text.
    """
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")
    text = buf.getvalue()
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8", newline="\n")
    elif target is not None:
        target.write(text)
    return text


def read_rows(path) -> tuple[list[str], list[list[float | None]]]:
    """Read a numeric CSV written by ``write_rows``; ``undefined`` becomes ``None``."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise InputFileError(f"{path}:1: empty file")
    header = lines[0].split(",")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise InputFileError(f"{path}:{lineno}: expected {len(header)} fields, got {len(cells)}")
        try:
            rows.append([None if c == UNDEFINED else float(c) for c in cells])
        except ValueError as exc:
            raise InputFileError(f"{path}:{lineno}: {exc}") from None
    return header, rows


def curve_rows(curve) -> list[tuple]:
    if hasattr(curve, "t"):
        return list(zip(curve.t, curve.x, curve.y))
    return list(zip(curve.x, curve.y))


def point_set_rows(points: PRPointSet) -> list[tuple]:
    return [(p.t, p.recall, p.precision) for p in points]


def read_scores_csv(path) -> EmpiricalSample:
    """Read a ``label,score`` CSV into an :class:`EmpiricalSample`."""
    text = Path(path).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputFileError(f"{path}:1: empty file") from None
    if [h.strip().lower() for h in header] != ["label", "score"]:
        raise InputFileError(f"{path}:1: header must be 'label,score', got {','.join(header)!r}")
    plus, minus = [], []
    for row in reader:
        lineno = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise InputFileError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
        label, raw = row[0].strip().lower(), row[1].strip()
        try:
            score = float(raw)
        except ValueError:
            raise InputFileError(f"{path}:{lineno}: score {raw!r} is not a number") from None
        if not math.isfinite(score):
            raise InputFileError(f"{path}:{lineno}: score must be finite")
        if label in POSITIVE_LABELS:
            plus.append(score)
        elif label in NEGATIVE_LABELS:
            minus.append(score)
        else:
            raise InputFileError(f"{path}:{lineno}: unknown label {row[0]!r}")
    if not plus or not minus:
        raise InputFileError(f"{path}: both classes need at least one score")
    return EmpiricalSample(np.array(plus), np.array(minus))


def dump_json(obj, target=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8", newline="\n")
    elif target is not None:
        target.write(text)
    return text

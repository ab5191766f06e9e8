"""Family files and table output.

A family file is a JSON object::

    {"dim": N, "elements": [E_1, E_2, ...]}

Each ``E_k`` lists the ``N*N`` entries of one matrix in row-major order, each
entry written as ``[re, im]`` (a bare number is read as real).  Nested rows,
``[[row_1], [row_2], ...]``, are accepted too.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .families import FamilySpec
from .tracial import TracialFamily


class FamilyFormatError(ValueError):
    pass


def _entry(value: Any, k: int, row: int, col: int) -> complex:
    where = f"element {k}, entry (row {row}, col {col})"
    if isinstance(value, bool):
        raise FamilyFormatError(f"{where}: booleans are not numbers")
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(float(value[0]), float(value[1]))
    raise FamilyFormatError(f"{where}: expected a number or [re, im], got {value!r}")


def _is_entry(value: Any) -> bool:
    if isinstance(value, bool):
        return False
    if isinstance(value, (int, float)):
        return True
    return (
        isinstance(value, (list, tuple)) and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    )


def _element(raw: Any, k: int, dim: int) -> np.ndarray:
    if not isinstance(raw, list):
        raise FamilyFormatError(f"element {k}: expected a list of entries")
    if len(raw) == dim * dim and all(_is_entry(v) for v in raw):
        return np.array([_entry(v, k, i // dim, i % dim) for i, v in enumerate(raw)]).reshape(dim, dim)
    if len(raw) == dim and all(isinstance(r, list) and len(r) == dim for r in raw):
        return np.array([[_entry(v, k, i, j) for j, v in enumerate(r)] for i, r in enumerate(raw)])
    if len(raw) == dim * dim:
        for i, v in enumerate(raw):
            _entry(v, k, i // dim, i % dim)
    raise FamilyFormatError(
        f"element {k}: expected {dim * dim} row-major entries or {dim} rows of {dim}, got {len(raw)} items"
    )


def family_from_dict(data: Mapping) -> TracialFamily:
    if not isinstance(data, Mapping):
        raise FamilyFormatError("family file must hold a JSON object")
    if "kind" in data:
        return FamilySpec.from_dict(data).build()
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FamilyFormatError(f"'dim' must be a positive integer, got {dim!r}")
    elements = data.get("elements")
    if not isinstance(elements, list) or not elements:
        raise FamilyFormatError("'elements' must be a nonempty list")
    return TracialFamily([_element(raw, k, dim) for k, raw in enumerate(elements)])


def load_family(path: str | Path) -> TracialFamily:
    """Read a family file, or a family spec (an object with ``kind``)."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FamilyFormatError(f"{path}: invalid JSON ({exc})") from None
    return family_from_dict(data)


def family_to_dict(d: TracialFamily) -> dict:
    return {
        "dim": d.dim,
        "elements": [[[float(z.real), float(z.imag)] for z in x.ravel()] for x in d],
    }


def save_family(d: TracialFamily, path: str | Path) -> None:
    Path(path).write_text(json.dumps(family_to_dict(d)) + "\n")


def dumps_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def dumps_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()

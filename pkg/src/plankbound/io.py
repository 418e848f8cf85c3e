"""JSON formats for bodies and plank sets.

Body::

    {"dimension": d, "vertices": [[x1, ..., xd], ...]}

Plank set::

    {"dimension": d, "planks": [{"normal": [...], "translation": t, "width": w}, ...]}

Floats are written with ``repr`` (shortest round-trip), so a file written
here re-loads to identical values.
"""
from __future__ import annotations

import json
import math
import warnings
from pathlib import Path

import numpy as np

from .geometry import UNIT_TOL, Polytope
from .planks import Plank

RENORMALIZE_WARN = 1e-9


class SchemaError(ValueError):
    pass


class NormalRenormalized(UserWarning):
    pass


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {type(value).__name__}")
    value = float(value)
    if not math.isfinite(value):
        raise SchemaError(f"{where}: not a finite number")
    return value


def _vector(value, d: int, where: str) -> list[float]:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected a list of {d} numbers")
    if len(value) != d:
        raise SchemaError(f"{where}: expected {d} coordinates, got {len(value)}")
    return [_number(x, f"{where}[{i}]") for i, x in enumerate(value)]


def _dimension(doc) -> int:
    if not isinstance(doc, dict):
        raise SchemaError("top level: expected a JSON object")
    if "dimension" not in doc:
        raise SchemaError("dimension: missing")
    d = doc["dimension"]
    if isinstance(d, bool) or not isinstance(d, int):
        raise SchemaError("dimension: expected an integer")
    if d < 2:
        raise SchemaError(f"dimension: must be at least 2, got {d}")
    return d


def _read(path) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def body_from_dict(doc) -> Polytope:
    d = _dimension(doc)
    verts = doc.get("vertices")
    if not isinstance(verts, list) or not verts:
        raise SchemaError("vertices: expected a nonempty list of points")
    V = [_vector(v, d, f"vertices[{i}]") for i, v in enumerate(verts)]
    return Polytope(np.array(V))


def body_to_dict(body: Polytope) -> dict:
    return {"dimension": body.dim, "vertices": body.vertices.tolist()}


def load_body(path) -> Polytope:
    return body_from_dict(_read(path))


def planks_from_dict(doc) -> list[Plank]:
    """Parse a plank set; normals not already unit are rescaled.

    Emits ``NormalRenormalized`` if rescaling moved a coordinate by more
    than 1e-9.
    """
    d = _dimension(doc)
    items = doc.get("planks")
    if not isinstance(items, list):
        raise SchemaError("planks: expected a list")
    planks = []
    for i, item in enumerate(items):
        where = f"planks[{i}]"
        if not isinstance(item, dict):
            raise SchemaError(f"{where}: expected an object")
        for key in ("normal", "translation", "width"):
            if key not in item:
                raise SchemaError(f"{where}.{key}: missing")
        n = np.array(_vector(item["normal"], d, f"{where}.normal"))
        t = _number(item["translation"], f"{where}.translation")
        w = _number(item["width"], f"{where}.width")
        if w < 0:
            raise SchemaError(f"{where}.width: must be non-negative")
        norm = float(np.linalg.norm(n))
        if norm == 0.0:
            raise SchemaError(f"{where}.normal: zero vector")
        if abs(norm - 1.0) > UNIT_TOL:
            unit = n / norm
            shift = float(np.abs(unit - n).max())
            if shift > RENORMALIZE_WARN:
                warnings.warn(f"{where}.normal renormalized (max coordinate change {shift:.3g})",
                              NormalRenormalized, stacklevel=2)
            n = unit
        planks.append(Plank(n, t, w))
    return planks


def planks_to_dict(planks, d: int) -> dict:
    return {
        "dimension": d,
        "planks": [{"normal": p.normal.tolist(), "translation": p.translation, "width": p.width}
                   for p in planks],
    }


def load_planks(path) -> list[Plank]:
    return planks_from_dict(_read(path))


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def write_json(doc, path) -> None:
    Path(path).write_text(dumps(doc))

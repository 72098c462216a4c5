"""JSON interchange for matrices, projections and points.

A matrix is ``{"rows": n, "cols": m, "data": [[re, im], ...]}`` with the
entries flattened row-major.  Projections and points wrap that format under
a ``"kind"`` tag: ``projection`` (the matrix itself), ``partial_isometry``
(matrix plus its context projection) and ``point`` (representative plus
context).  Values survive the decimal round trip well within 1e-15
relative; bit-exactness is not promised.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .errors import InvalidInput
from .linalg import DEFAULT_TOL, Tolerance, as_matrix
from .projective import Projection, ProjectivePoint, classify, point_from_projection

__all__ = [
    "matrix_to_obj",
    "matrix_from_obj",
    "projection_to_obj",
    "point_to_obj",
    "load_obj",
    "save_obj",
    "point_from_obj",
    "projection_from_obj",
]


def matrix_to_obj(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=complex)
    return {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "data": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def matrix_from_obj(obj: Any) -> np.ndarray:
    if not isinstance(obj, dict):
        raise InvalidInput("matrix object must be a JSON mapping")
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput("matrix object needs integer rows/cols and a data list") from exc
    if rows < 1 or cols < 1 or len(data) != rows * cols:
        raise InvalidInput("matrix data length does not match rows * cols")
    try:
        flat = np.array([complex(re, im) for re, im in data], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidInput("matrix entries must be [re, im] pairs") from exc
    return as_matrix(flat.reshape(rows, cols))


def projection_to_obj(q: Projection) -> dict:
    obj = matrix_to_obj(q.mat)
    obj["kind"] = "projection"
    return obj


def point_to_obj(m: ProjectivePoint) -> dict:
    return {
        "kind": "point",
        "rep": matrix_to_obj(m.rep.mat),
        "context": matrix_to_obj(m.context.mat),
    }


def save_obj(obj: dict, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_obj(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read JSON from {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise InvalidInput(f"{path} does not hold a JSON object")
    return obj


def projection_from_obj(obj: dict, tol: Tolerance = DEFAULT_TOL) -> Projection:
    if obj.get("kind") != "projection":
        raise InvalidInput("expected an object of kind 'projection'")
    return Projection(matrix_from_obj(obj), tol)


def point_from_obj(obj: dict, context: Projection | None = None,
                   tol: Tolerance = DEFAULT_TOL) -> ProjectivePoint:
    """Build a point from a kind-tagged object.

    A ``point`` object carries its own context.  A ``projection`` object is
    lifted to the point with that range, relative to the supplied context
    (callers choose a convention when none is given).
    """
    kind = obj.get("kind")
    if kind == "point":
        context = Projection(matrix_from_obj(obj["context"]), tol)
        return classify(matrix_from_obj(obj["rep"]), context, tol)
    if kind == "partial_isometry":
        context = Projection(matrix_from_obj(obj["context"]), tol)
        return classify(matrix_from_obj(obj), context, tol)
    if kind == "projection":
        q = Projection(matrix_from_obj(obj), tol)
        if context is None:
            raise InvalidInput("a projection needs a context to become a point")
        return point_from_projection(q, context, tol)
    raise InvalidInput(f"unknown kind tag {kind!r}")

"""JSON wire formats shared by the CLI.

Formats:

* algebra:       ``{"blocks": [{"dim": n, "weight": c}, ...]}``
* operator:      ``{"algebra": {...}, "blocks": [[[re, im], ...], ...]}``
  with row-major block matrices, entries as [re, im] pairs
* step function: ``{"pieces": [{"value": v, "width": w}, ...]}``
* norm spec:     ``{"type": "lp", "p": 2}``,
                 ``{"type": "lorentz", "p": 1, "weight": {...}}``,
                 ``{"type": "log"}``
* linear map:    ``{"domain": {...}, "codomain": {...}, "matrix": [[[re, im], ...], ...]}``
  in the canonical blockwise row-major matrix-unit basis
* plan:          ``{"domain": {...}, "codomain": {...}, "entries": [...]}``

Non-finite floats are encoded as the strings "inf", "-inf", "nan" so the
emitted documents stay strict JSON.
"""

from __future__ import annotations

import math
from typing import Any

import numpy as np

from .algebra import FiniteAlgebra, Operator
from .errors import ShapeMismatch
from .jordan import JordanPlan, LinearMap, PlanEntry
from .norms import LogF, Lorentz, Lp, NormSpec
from .stepfun import StepFunction


def jsonable(value: Any) -> Any:
    """Recursively convert to JSON-safe primitives (strict JSON floats)."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        value = float(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def encode_algebra(alg: FiniteAlgebra) -> dict:
    return {"blocks": [{"dim": d, "weight": c} for d, c in alg.blocks]}


def decode_algebra(data: dict) -> FiniteAlgebra:
    try:
        blocks = tuple((int(b["dim"]), float(b["weight"])) for b in data["blocks"])
    except (KeyError, TypeError) as exc:
        raise ShapeMismatch(f"malformed algebra object: {exc}") from exc
    return FiniteAlgebra(blocks)


def _encode_matrix(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _decode_matrix(rows: list) -> np.ndarray:
    try:
        return np.array([[complex(e[0], e[1]) for e in row] for row in rows],
                        dtype=complex)
    except (TypeError, IndexError) as exc:
        raise ShapeMismatch(f"malformed complex matrix: {exc}") from exc


def encode_operator(x: Operator) -> dict:
    return {
        "algebra": encode_algebra(x.algebra),
        "blocks": [_encode_matrix(b) for b in x.blocks],
    }


def decode_operator(data: dict) -> Operator:
    try:
        alg = decode_algebra(data["algebra"])
        blocks = [_decode_matrix(b) for b in data["blocks"]]
    except KeyError as exc:
        raise ShapeMismatch(f"operator object missing field {exc}") from exc
    return Operator(alg, blocks)


def encode_step_function(f: StepFunction) -> dict:
    return {"pieces": [{"value": v, "width": w} for v, w in f.pieces]}


def decode_step_function(data: dict) -> StepFunction:
    try:
        pieces = tuple((float(p["value"]), float(p["width"])) for p in data["pieces"])
    except (KeyError, TypeError) as exc:
        raise ShapeMismatch(f"malformed step function object: {exc}") from exc
    return StepFunction(pieces)


def encode_norm_spec(spec: NormSpec) -> dict:
    if isinstance(spec, Lp):
        return {"type": "lp", "p": spec.p}
    if isinstance(spec, Lorentz):
        return {"type": "lorentz", "p": spec.p, "weight": encode_step_function(spec.weight)}
    return {"type": "log"}


def decode_norm_spec(data: dict) -> NormSpec:
    try:
        kind = data["type"]
        if kind == "lp":
            return Lp(float(data["p"]))
        if kind == "lorentz":
            return Lorentz(float(data["p"]), decode_step_function(data["weight"]))
        if kind == "log":
            return LogF()
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeMismatch(f"malformed norm spec: {exc}") from exc
    raise ShapeMismatch(f"unknown norm spec type {kind!r}")


def encode_linear_map(m: LinearMap) -> dict:
    return {
        "domain": encode_algebra(m.domain),
        "codomain": encode_algebra(m.codomain),
        "matrix": _encode_matrix(m.matrix),
    }


def decode_linear_map(data: dict) -> LinearMap:
    try:
        return LinearMap(decode_algebra(data["domain"]),
                         decode_algebra(data["codomain"]),
                         _decode_matrix(data["matrix"]))
    except KeyError as exc:
        raise ShapeMismatch(f"linear map object missing field {exc}") from exc


def encode_plan(plan: JordanPlan) -> dict:
    return {
        "domain": encode_algebra(plan.domain),
        "codomain": encode_algebra(plan.codomain),
        "entries": [
            {"source": e.source, "target": e.target,
             "transpose": e.transpose, "unitary_seed": e.unitary_seed}
            for e in plan.entries
        ],
    }


def decode_plan(data: dict) -> JordanPlan:
    try:
        entries = tuple(PlanEntry(int(e["source"]), int(e["target"]),
                                  bool(e["transpose"]), int(e["unitary_seed"]))
                        for e in data["entries"])
        return JordanPlan(decode_algebra(data["domain"]),
                          decode_algebra(data["codomain"]), entries)
    except (KeyError, TypeError) as exc:
        raise ShapeMismatch(f"malformed plan object: {exc}") from exc

"""Matrix interchange format and instance (de)serialization.

A matrix is stored as ``{"rows": m, "cols": k, "data": [[re, im], ...]}``
with ``data`` in row-major order.  Instances are dicts of named values, each
tagged with its kind so that they decode without guessing::

    {"x": {"kind": "matrix", "value": {...}},
     "xs": {"kind": "tuple", "value": [{...}, ...]},
     "p": {"kind": "real_vector", "value": [0.5, 0.5]},
     "alphas": {"kind": "complex_vector", "value": [[1.0, 0.0], ...]},
     "omega": {"kind": "real", "value": 0.7},
     "order": {"kind": "int", "value": 2}}
"""

from __future__ import annotations

import json
import math
from numbers import Integral, Real

import numpy as np

from .errors import DomainError

__all__ = [
    "matrix_to_record",
    "record_to_matrix",
    "tuple_to_records",
    "records_to_tuple",
    "encode_instance",
    "decode_instance",
    "dumps",
    "loads",
]


def matrix_to_record(a) -> dict:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise DomainError(f"only matrices serialize, got shape {a.shape}")
    rows, cols = a.shape
    data = [[float(z.real), float(z.imag)] for z in a.reshape(-1)]
    return {"rows": rows, "cols": cols, "data": data}


def _finite_pair(entry) -> complex:
    if not isinstance(entry, (list, tuple)) or len(entry) != 2:
        raise DomainError(f"matrix entry must be a [re, im] pair, got {entry!r}")
    re, im = entry
    if isinstance(re, bool) or isinstance(im, bool) or not isinstance(re, Real) or not isinstance(im, Real):
        raise DomainError(f"matrix entry must hold numbers, got {entry!r}")
    if not (math.isfinite(re) and math.isfinite(im)):
        raise DomainError("matrix entry is NaN or infinite")
    return complex(re, im)


def record_to_matrix(rec: dict) -> np.ndarray:
    try:
        rows, cols, data = rec["rows"], rec["cols"], rec["data"]
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed matrix record: {exc}") from exc
    if not (isinstance(rows, Integral) and isinstance(cols, Integral)) or rows < 1 or cols < 1:
        raise DomainError(f"bad matrix dimensions {rows!r} x {cols!r}")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise DomainError(f"ragged matrix: expected {rows * cols} entries")
    out = np.array([_finite_pair(z) for z in data], dtype=complex)
    return out.reshape(rows, cols)


def tuple_to_records(xs) -> list[dict]:
    return [matrix_to_record(x) for x in np.asarray(xs)]


def records_to_tuple(recs: list) -> np.ndarray:
    if not isinstance(recs, list) or not recs:
        raise DomainError("a tuple must be a nonempty list of matrix records")
    items = [record_to_matrix(r) for r in recs]
    if len({x.shape for x in items}) != 1:
        raise DomainError("tuple records have mixed shapes")
    return np.stack(items)


def _encode_value(v):
    if isinstance(v, (bool, np.bool_)):
        return {"kind": "bool", "value": bool(v)}
    if isinstance(v, (int, np.integer)):
        return {"kind": "int", "value": int(v)}
    if isinstance(v, (float, np.floating)):
        return {"kind": "real", "value": float(v)}
    if isinstance(v, (complex, np.complexfloating)):
        return {"kind": "complex", "value": [float(v.real), float(v.imag)]}
    arr = np.asarray(v)
    if arr.ndim == 1:
        if np.iscomplexobj(arr):
            return {"kind": "complex_vector", "value": [[float(z.real), float(z.imag)] for z in arr]}
        return {"kind": "real_vector", "value": [float(z) for z in arr]}
    if arr.ndim == 2:
        return {"kind": "matrix", "value": matrix_to_record(arr)}
    if arr.ndim == 3:
        return {"kind": "tuple", "value": tuple_to_records(arr)}
    raise DomainError(f"cannot encode value of shape {arr.shape}")


def _decode_value(item):
    kind, value = item["kind"], item["value"]
    if kind == "bool":
        return bool(value)
    if kind == "int":
        return int(value)
    if kind == "real":
        if not math.isfinite(value):
            raise DomainError("non-finite scalar")
        return float(value)
    if kind == "complex":
        return _finite_pair(value)
    if kind == "real_vector":
        arr = np.asarray(value, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise DomainError("non-finite vector entry")
        return arr
    if kind == "complex_vector":
        return np.array([_finite_pair(z) for z in value], dtype=complex)
    if kind == "matrix":
        return record_to_matrix(value)
    if kind == "tuple":
        return records_to_tuple(value)
    raise DomainError(f"unknown value kind {kind!r}")


def encode_instance(instance: dict) -> dict:
    return {name: _encode_value(v) for name, v in instance.items()}


def decode_instance(data: dict) -> dict:
    return {name: _decode_value(item) for name, item in data.items()}


def _reject_constant(token: str):
    raise DomainError(f"non-finite JSON constant {token}")


def dumps(obj, **kwargs) -> str:
    return json.dumps(obj, allow_nan=False, **kwargs)


def loads(text: str):
    return json.loads(text, parse_constant=_reject_constant)

"""JSON interchange formats and (de)serialization.

A matrix-set file is
    {"field": "real"|"complex", "rows": R, "cols": C,
     "matrices": [{"name": ..., "entries": [[...], ...]}, ...]}
with plain numbers for real entries and [re, im] pairs for complex ones.
Serialization is canonical: fixed key order, shortest round-trip float
printing, newline-terminated, so save(load(f)) is a canonical form and
load(save(s)) reproduces s bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict

import numpy as np

from .engine import Decision, EngineConfig, VerifyReport
from .errors import InvalidInput, IoError, ParseError, SchemaError
from .matrices import MatrixSet
from .rectangular import Certificate
from .fingerprint import Fingerprint


def _reject_constant(token: str):
    raise SchemaError(f"non-finite number {token!r} is not allowed")


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh, parse_constant=_reject_constant)
    except OSError as err:
        raise IoError(f"cannot read {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ParseError(f"{path}: malformed JSON at line {err.lineno}, "
                         f"column {err.colno} (char {err.pos}): {err.msg}") from err


def _dump_json(obj, path: str):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=2, allow_nan=False)
            fh.write("\n")
    except OSError as err:
        raise IoError(f"cannot write {path}: {err}") from err


def _as_number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {x!r}")
    if not math.isfinite(x):
        raise SchemaError(f"{where}: non-finite number")
    return float(x)


def _entry_from_json(x, field: str, where: str) -> complex:
    if field == "real":
        if isinstance(x, list):
            raise SchemaError(f"{where}: real files must not contain "
                              "[re, im] pairs")
        return _as_number(x, where)
    if not (isinstance(x, list) and len(x) == 2):
        raise SchemaError(f"{where}: complex entries must be [re, im] pairs")
    return complex(_as_number(x[0], where), _as_number(x[1], where))


def _entries_to_json(m: np.ndarray, field: str):
    if field == "real":
        return [[float(x) for x in row] for row in m]
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def matrix_to_json(m: np.ndarray) -> dict:
    field = "complex" if np.iscomplexobj(m) else "real"
    return {"field": field, "rows": int(m.shape[0]), "cols": int(m.shape[1]),
            "entries": _entries_to_json(m, field)}


def matrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    field = obj.get("field")
    if field not in ("real", "complex"):
        raise SchemaError(f"{where}: field must be 'real' or 'complex'")
    rows, cols = obj.get("rows"), obj.get("cols")
    entries = obj.get("entries")
    data = _parse_entries(entries, rows, cols, field, where)
    return data


def _parse_entries(entries, rows, cols, field, where) -> np.ndarray:
    if not (isinstance(rows, int) and isinstance(cols, int)
            and rows > 0 and cols > 0):
        raise SchemaError(f"{where}: rows and cols must be positive integers")
    if not isinstance(entries, list) or len(entries) != rows:
        raise SchemaError(f"{where}: expected {rows} entry rows")
    dtype = np.float64 if field == "real" else np.complex128
    out = np.empty((rows, cols), dtype=dtype)
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != cols:
            raise SchemaError(f"{where}: row {i + 1} does not have {cols} entries")
        for j, x in enumerate(row):
            out[i, j] = _entry_from_json(x, field, f"{where}[{i + 1},{j + 1}]")
    return out


def load_matrix_set(path: str) -> MatrixSet:
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be an object")
    field = doc.get("field")
    if field not in ("real", "complex"):
        raise SchemaError(f"{path}: field must be 'real' or 'complex'")
    rows, cols = doc.get("rows"), doc.get("cols")
    mats = doc.get("matrices")
    if not isinstance(mats, list) or not mats:
        raise SchemaError(f"{path}: matrices must be a nonempty array")
    arrays, labels = [], []
    for idx, rec in enumerate(mats):
        if not isinstance(rec, dict):
            raise SchemaError(f"{path}: matrices[{idx}] must be an object")
        name = rec.get("name") or f"A{idx + 1}"
        if not isinstance(name, str):
            raise SchemaError(f"{path}: matrices[{idx}].name must be a string")
        arrays.append(_parse_entries(rec.get("entries"), rows, cols, field,
                                     f"{path}: matrix {name!r}"))
        labels.append(name)
    if len(set(labels)) != len(labels):
        raise SchemaError(f"{path}: matrix names must be unique")
    try:
        return MatrixSet.from_arrays(arrays, labels, field)
    except InvalidInput as err:
        raise SchemaError(f"{path}: {err}") from err


def save_matrix_set(s: MatrixSet, path: str):
    doc = {
        "field": s.field,
        "rows": s.rows,
        "cols": s.cols,
        "matrices": [
            {"name": lab, "entries": _entries_to_json(m, s.field)}
            for m, lab in zip(s.matrices, s.labels)
        ],
    }
    _dump_json(doc, path)


def _complex_to_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def fingerprint_to_json(fp: Fingerprint) -> dict:
    return {
        "alphabet": list(fp.labels),
        "max_len": fp.max_len,
        "entries": [
            {"word": [int(i) for i in w], "trace": _complex_to_json(t)}
            for w, t in fp.entries.items()
        ],
    }


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "kind": cert.kind,
        "U": matrix_to_json(cert.left),
        "V": matrix_to_json(cert.right) if cert.right is not None else None,
        "residual": float(cert.residual),
    }


def certificate_from_json(obj, where: str = "certificate") -> Certificate:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    kind = obj.get("kind")
    if not isinstance(kind, str):
        raise SchemaError(f"{where}: kind must be a string")
    left = matrix_from_json(obj.get("U"), f"{where}.U")
    right = None
    if obj.get("V") is not None:
        right = matrix_from_json(obj.get("V"), f"{where}.V")
    residual = _as_number(obj.get("residual"), f"{where}.residual")
    return Certificate(kind, left, right, residual)


def load_certificate(path: str) -> Certificate:
    return certificate_from_json(_load_json(path), where=path)


def save_certificate(cert: Certificate, path: str):
    _dump_json(certificate_to_json(cert), path)


def config_to_json(config: EngineConfig) -> dict:
    return asdict(config)


def decision_to_json(d: Decision) -> dict:
    return {
        "kind": d.kind,
        "verdict": d.verdict,
        "word_cap_used": d.word_cap_used,
        "bound": d.bound,
        "config": config_to_json(d.config),
        "certificate": (certificate_to_json(d.certificate)
                        if d.certificate is not None else None),
        "word": list(d.word) if d.word is not None else None,
        "word_label": d.word_label,
        "trace_left": (_complex_to_json(d.trace_left)
                       if d.trace_left is not None else None),
        "trace_right": (_complex_to_json(d.trace_right)
                        if d.trace_right is not None else None),
        "reason": d.reason,
    }


def verify_report_to_json(kind: str, r: VerifyReport) -> dict:
    return {
        "kind": kind,
        "pass": r.passed,
        "isometry_defect_left": r.isometry_defect_left,
        "isometry_defect_right": r.isometry_defect_right,
        "intertwining_residual": r.intertwining_residual,
        "isometry_threshold": r.threshold,
        "residual_threshold": r.residual_threshold,
    }

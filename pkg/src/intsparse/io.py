"""File formats.

Matrix files are JSON objects ``{"m", "d", "k", "entries", "certificate"?}``
with row-major entries given as integers or exact "p/q" strings.  Algebraic
matrix files add ``"kind": "algebraic"``, the provenance ``B`` and
``minpoly``, and cached complex entries as [re, im] pairs.  Measurement
files hold one decimal number per line.  Experiment configs are JSON
mirrors of ``ExperimentConfig``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from .algebraic import AlgebraicSensingMatrix, NumberFieldSpec, build_algebraic_matrix
from .errors import DimensionError
from .exact import ExactMatrix, as_exact, format_rational, to_fraction
from .forge import PluckerCertificate, SensingMatrix

CACHE_TOL = 1e-9

AnyMatrix = Union[SensingMatrix, ExactMatrix, AlgebraicSensingMatrix]


def _encode(q) -> Union[int, str]:
    q = to_fraction(q)
    return int(q) if q.denominator == 1 else format_rational(q)


def matrix_to_dict(A: AnyMatrix) -> dict:
    if isinstance(A, AlgebraicSensingMatrix):
        return {
            "kind": "algebraic", "m": A.m, "d": A.d,
            "B": [list(r) for r in A.B], "minpoly": list(A.field.minpoly),
            "precision": A.precision,
            "entries": [[[float(z.real), float(z.imag)] for z in row] for row in A.entries],
        }
    M = as_exact(A)
    out = {"m": M.rows, "d": M.cols, "k": _encode(M.max_abs()),
           "entries": [[_encode(v) for v in row] for row in M.to_rows()]}
    cert = getattr(A, "certificate", None)
    if cert is not None:
        out["certificate"] = {"all_nonzero": cert.all_nonzero,
                              "singular_sets": [list(I) for I in cert.singular_sets]}
    return out


def matrix_from_dict(data: dict) -> AnyMatrix:
    if data.get("kind") == "algebraic":
        A = build_algebraic_matrix(data["B"], NumberFieldSpec(tuple(data["minpoly"])),
                                   data.get("precision", 1e-30))
        cached = data.get("entries")
        if cached is not None:
            C = np.array([[complex(re, im) for re, im in row] for row in cached])
            if C.shape != A.entries.shape or np.abs(C - A.entries).max() > CACHE_TOL:
                raise ValueError("cached entries disagree with the provenance (B, minpoly)")
        return A
    rows = [[to_fraction(v) for v in row] for row in data["entries"]]
    M = ExactMatrix.from_rows(rows)
    if ("m" in data and data["m"] != M.rows) or ("d" in data and data["d"] != M.cols):
        raise DimensionError("declared shape does not match entries")
    if not M.is_integer():
        return M
    cert = None
    if "certificate" in data:
        c = data["certificate"]
        cert = PluckerCertificate(bool(c["all_nonzero"]),
                                  tuple(tuple(I) for I in c.get("singular_sets", ())))
    return SensingMatrix(tuple(tuple(int(v) for v in r) for r in rows), cert)


def save_matrix(A: AnyMatrix, path) -> None:
    Path(path).write_text(json.dumps(matrix_to_dict(A), indent=1) + "\n")


def load_matrix(path) -> AnyMatrix:
    return matrix_from_dict(json.loads(Path(path).read_text()))


def save_field(field: NumberFieldSpec, path) -> None:
    Path(path).write_text(json.dumps({"minpoly": list(field.minpoly),
                                      "degree": field.degree}) + "\n")


def load_field(path) -> NumberFieldSpec:
    data = json.loads(Path(path).read_text())
    field = NumberFieldSpec(tuple(data["minpoly"]))
    if "degree" in data and data["degree"] != field.degree:
        raise DimensionError("declared degree does not match minpoly")
    return field


def save_measurement(y, path) -> None:
    Path(path).write_text("".join(f"{float(v)!r}\n" for v in np.asarray(y, dtype=float)))


def load_measurement(path) -> np.ndarray:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    return np.array([float(ln) for ln in lines if ln and not ln.startswith("#")])


def load_config(path):
    from .bench import ExperimentConfig

    return ExperimentConfig.from_dict(json.loads(Path(path).read_text()))

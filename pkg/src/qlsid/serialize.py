"""JSON schemas and deterministic file I/O.

All documents carry "schema": "qls/1".  Complex numbers serialize as
[re, im] pairs, matrices as nested arrays, doubled-up matrices as their two
defining blocks.  Output is rendered by a small deterministic emitter with
floats at 17 significant digits, so identical inputs give byte-identical
files; writes go through a temporary file and an atomic rename.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

import numpy as np

from .doubled import DoubledUpMatrix
from .errors import ParseError
from .rational import RationalFn
from .stationary import PowerSpectrumSISO
from .systems import GaussianInput, QlsSystem
from .transfer import TransferFunctionSISO

SCHEMA = "qls/1"


def _fmt_float(x: float) -> str:
    if x != x:
        raise ValueError("cannot serialize NaN")
    s = format(float(x), ".17g")
    return s


def dumps(obj) -> str:
    """Deterministic JSON with fixed float formatting."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def cmatrix_to_json(mat) -> list:
    mat = np.atleast_2d(np.asarray(mat, dtype=complex))
    return [[complex_to_json(v) for v in row] for row in mat]


def dmatrix_to_json(d: DoubledUpMatrix) -> dict:
    return {"upper_left": cmatrix_to_json(d.upper_left),
            "upper_right": cmatrix_to_json(d.upper_right)}


def _expect(cond: bool, msg: str):
    if not cond:
        raise ParseError(msg)


def json_to_complex(v, field: str) -> complex:
    _expect(isinstance(v, (list, tuple)) and len(v) == 2,
            f"{field}: complex values are [re, im] pairs")
    re, im = v
    _expect(isinstance(re, (int, float)) and isinstance(im, (int, float)),
            f"{field}: complex components must be numbers")
    return complex(re, im)


def json_to_cmatrix(v, field: str, rows: int | None = None,
                    cols: int | None = None) -> np.ndarray:
    _expect(isinstance(v, list), f"{field}: expected a nested array")
    out = []
    width = None
    for i, row in enumerate(v):
        _expect(isinstance(row, list), f"{field}[{i}]: expected an array")
        if width is None:
            width = len(row)
        _expect(len(row) == width, f"{field}[{i}]: ragged rows")
        out.append([json_to_complex(x, f"{field}[{i}][{j}]")
                    for j, x in enumerate(row)])
    if not out:
        mat = np.zeros((0, 0), dtype=complex)
    else:
        mat = np.array(out, dtype=complex)
    if rows is not None:
        _expect(mat.shape[0] == rows,
                f"{field}: expected {rows} rows, got {mat.shape[0]}")
    if cols is not None:
        _expect(mat.shape[1] == cols,
                f"{field}: expected {cols} columns, got {mat.shape[1]}")
    return mat


def json_to_dmatrix(v, field: str) -> DoubledUpMatrix:
    _expect(isinstance(v, dict) and "upper_left" in v and "upper_right" in v,
            f"{field}: doubled-up matrices need upper_left/upper_right")
    return DoubledUpMatrix(json_to_cmatrix(v["upper_left"], field),
                           json_to_cmatrix(v["upper_right"], field))


def check_schema(doc, field: str = "document"):
    _expect(isinstance(doc, dict), f"{field}: expected a JSON object")
    _expect(doc.get("schema") == SCHEMA,
            f"{field}: missing or unsupported schema (want \"{SCHEMA}\")")


def system_to_json(sys: QlsSystem) -> dict:
    doc = {"schema": SCHEMA, "n": sys.n_modes, "m": sys.n_channels,
           "C_minus": cmatrix_to_json(sys.coupling_minus),
           "C_plus": cmatrix_to_json(sys.coupling_plus),
           "Omega_minus": cmatrix_to_json(sys.ham_minus),
           "Omega_plus": cmatrix_to_json(sys.ham_plus)}
    if sys.scattering is not None:
        doc["S"] = dmatrix_to_json(sys.scattering)
    return doc


def json_to_system(doc) -> QlsSystem:
    check_schema(doc, "system")
    for key in ("n", "m", "C_minus", "C_plus", "Omega_minus", "Omega_plus"):
        _expect(key in doc, f"system: missing field {key!r}")
    n, m = doc["n"], doc["m"]
    _expect(isinstance(n, int) and n >= 0, "system: n must be a non-negative int")
    _expect(isinstance(m, int) and m >= 1, "system: m must be a positive int")
    kwargs = {}
    if doc.get("S") is not None:
        kwargs["scattering"] = json_to_dmatrix(doc["S"], "system.S")
    try:
        cm = json_to_cmatrix(doc["C_minus"], "system.C_minus")
        cp = json_to_cmatrix(doc["C_plus"], "system.C_plus")
        if n == 0:
            cm = cm.reshape(m, 0)
            cp = cp.reshape(m, 0)
        om = json_to_cmatrix(doc["Omega_minus"], "system.Omega_minus").reshape(n, n)
        op = json_to_cmatrix(doc["Omega_plus"], "system.Omega_plus").reshape(n, n)
        _expect(cm.shape == (m, n), f"system.C_minus: expected shape {(m, n)}")
        _expect(cp.shape == (m, n), f"system.C_plus: expected shape {(m, n)}")
        return QlsSystem(cm, cp, om, op, **kwargs)
    except ParseError:
        raise
    except (ValueError, Exception) as exc:
        raise ParseError(f"system: invalid data ({exc})") from exc


def input_to_json(v: GaussianInput) -> dict:
    return {"schema": SCHEMA, "N": cmatrix_to_json(v.N),
            "M": cmatrix_to_json(v.M)}


def json_to_input(doc) -> GaussianInput:
    check_schema(doc, "input")
    for key in ("N", "M"):
        _expect(key in doc, f"input: missing field {key!r}")
    try:
        return GaussianInput(json_to_cmatrix(doc["N"], "input.N"),
                             json_to_cmatrix(doc["M"], "input.M"))
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError(f"input: invalid covariance ({exc})") from exc


def rational_to_json(fn: RationalFn) -> dict:
    return {"zeros": [complex_to_json(z) for z in fn.zeros],
            "poles": [complex_to_json(p) for p in fn.poles],
            "gain": complex_to_json(fn.gain)}


def json_to_rational(doc, field: str) -> RationalFn:
    _expect(isinstance(doc, dict), f"{field}: expected an object")
    for key in ("zeros", "poles", "gain"):
        _expect(key in doc, f"{field}: missing field {key!r}")
    zeros = [json_to_complex(z, f"{field}.zeros") for z in doc["zeros"]]
    poles = [json_to_complex(p, f"{field}.poles") for p in doc["poles"]]
    return RationalFn(zeros, poles, json_to_complex(doc["gain"], f"{field}.gain"))


def transfer_to_json(tf: TransferFunctionSISO) -> dict:
    return {"schema": SCHEMA,
            "xi_minus": rational_to_json(tf.xi_minus),
            "xi_plus": rational_to_json(tf.xi_plus)}


def json_to_transfer(doc) -> TransferFunctionSISO:
    check_schema(doc, "transfer")
    for key in ("xi_minus", "xi_plus"):
        _expect(key in doc, f"transfer: missing field {key!r}")
    try:
        return TransferFunctionSISO(
            json_to_rational(doc["xi_minus"], "transfer.xi_minus"),
            json_to_rational(doc["xi_plus"], "transfer.xi_plus"))
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(f"transfer: {exc}") from exc


def spectrum_to_json(ps: PowerSpectrumSISO) -> dict:
    return {"schema": SCHEMA,
            "phi11": rational_to_json(ps.phi11),
            "phi12": rational_to_json(ps.phi12),
            "phi22": rational_to_json(ps.phi22)}


def json_to_spectrum(doc) -> PowerSpectrumSISO:
    check_schema(doc, "spectrum")
    for key in ("phi11", "phi12", "phi22"):
        _expect(key in doc, f"spectrum: missing field {key!r}")
    return PowerSpectrumSISO(
        json_to_rational(doc["phi11"], "spectrum.phi11"),
        json_to_rational(doc["phi12"], "spectrum.phi12"),
        json_to_rational(doc["phi22"], "spectrum.phi22"))


def load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON ({exc})") from exc

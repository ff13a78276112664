"""JSON encodings for matrices, maps, check reports and canonical forms.

Floats go through ``repr`` (shortest round-trip), so parse(emit(x)) == x
bit for bit. Matrix arguments may also be given as ``eij:n`` (e.g. ``e12:4``,
or ``e1,12:12`` for two-digit indices) or ``I:n``.
"""
from __future__ import annotations

import json
import math
import re
from pathlib import Path

import numpy as np

from .core import unit
from .errors import ParseError
from .mapspace import CanonicalForm, MatrixSpaceMap
from .preserver import CheckReport, Counterexample

VEC_CONVENTION = "column"

_UNIT = re.compile(r"^e(?:(\d)(\d)|(\d+),(\d+)):(\d+)$")
_IDENT = re.compile(r"^I:(\d+)$")


def _complex(re_part, im_part):
    out = np.empty(re_part.shape, dtype=np.complex128)
    out.real = re_part
    out.imag = im_part
    return out


def _num(x):
    x = float(x)
    return x if math.isfinite(x) else None


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    out = {"rows": m.shape[0], "cols": m.shape[1], "re": m.real.tolist()}
    if np.any(m.imag) or np.any(np.signbit(m.imag)):
        out["im"] = m.imag.tolist()
    return out


def _grid(obj, key, where):
    val = obj[key]
    if not isinstance(val, list) or not val or not all(isinstance(r, list) for r in val):
        raise ParseError(f"{where}.{key}: expected a non-empty 2-D array")
    width = len(val[0])
    if width == 0 or any(len(r) != width for r in val):
        raise ParseError(f"{where}.{key}: rows have unequal lengths")
    try:
        arr = np.array(val, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}.{key}: non-numeric entry ({exc})") from None
    return arr


def matrix_from_json(obj, where="matrix") -> np.ndarray:
    if not isinstance(obj, dict) or "re" not in obj:
        raise ParseError(f"{where}: expected an object with 're' (and optional 'im')")
    re_part = _grid(obj, "re", where)
    if "im" in obj and obj["im"] is not None:
        im_part = _grid(obj, "im", where)
        if im_part.shape != re_part.shape:
            raise ParseError(f"{where}: 're' has shape {re_part.shape} but 'im' has shape {im_part.shape}")
    else:
        im_part = np.zeros_like(re_part)
    rows, cols = re_part.shape
    for key, expect in (("rows", rows), ("cols", cols)):
        if key in obj and obj[key] != expect:
            raise ParseError(f"{where}.{key} = {obj[key]} but the data has {expect}")
    if "n" in obj and (obj["n"] != rows or obj["n"] != cols):
        raise ParseError(f"{where}.n = {obj['n']} but the data is {rows}x{cols}")
    m = _complex(re_part, im_part)
    if not np.all(np.isfinite(m)):
        raise ParseError(f"{where}: non-finite entry")
    return m


def map_to_json(m: MatrixSpaceMap) -> dict:
    return {"n": m.n, "vec_convention": VEC_CONVENTION, "mat": matrix_to_json(m.mat)}


def map_from_json(obj, where="map") -> MatrixSpaceMap:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    for key in ("n", "vec_convention", "mat"):
        if key not in obj:
            raise ParseError(f"{where}: missing '{key}'")
    if obj["vec_convention"] != VEC_CONVENTION:
        raise ParseError(
            f"{where}.vec_convention is {obj['vec_convention']!r}; only 'column' is accepted"
        )
    n = obj["n"]
    if not isinstance(n, int) or n < 1:
        raise ParseError(f"{where}.n must be a positive integer")
    mat = matrix_from_json(obj["mat"], f"{where}.mat")
    if mat.shape != (n * n, n * n):
        raise ParseError(f"{where}.mat is {mat.shape[0]}x{mat.shape[1]}, expected {n*n}x{n*n}")
    return MatrixSpaceMap(n, mat)


def covector_to_json(v) -> dict:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    return {"re": v.real.tolist(), "im": v.imag.tolist()}


def covector_from_json(obj, where="eta") -> np.ndarray:
    try:
        re_part = np.array(obj["re"], dtype=np.float64)
        im_part = np.array(obj.get("im", [0.0] * len(obj["re"])), dtype=np.float64)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"{where}: malformed covector ({exc})") from None
    if re_part.ndim != 1 or re_part.shape != im_part.shape:
        raise ParseError(f"{where}: 're' and 'im' must be equal-length 1-D arrays")
    return _complex(re_part, im_part)


def form_to_json(f: CanonicalForm) -> dict:
    return {
        "variant": f.variant,
        "c": [f.c.real, f.c.imag],
        "u": matrix_to_json(f.u),
        "eta": covector_to_json(f.eta),
        "residual": _num(f.residual),
    }


def form_from_json(obj, where="canonical_form") -> CanonicalForm:
    try:
        c = complex(obj["c"][0], obj["c"][1])
        u = matrix_from_json(obj["u"], f"{where}.u")
        eta = covector_from_json(obj["eta"], f"{where}.eta")
        variant = obj["variant"]
        residual = obj.get("residual") or 0.0
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"{where}: malformed canonical form ({exc})") from None
    try:
        return CanonicalForm(variant, c, u, eta, float(residual))
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from None


def report_to_json(r: CheckReport) -> dict:
    out = {
        "check": r.check,
        "verdict": r.verdict,
        "trials": r.trials,
        "max_residual": _num(r.max_residual),
        "tolerance": r.tolerance,
        "seed": r.seed,
        "counterexample": None,
        "notes": list(r.notes),
        "details": r.details,
    }
    if r.counterexample is not None:
        ce = r.counterexample
        out["counterexample"] = {
            "identity": ce.identity,
            "residual": _num(ce.residual),
            "matrices": {k: matrix_to_json(v) for k, v in ce.matrices.items()},
        }
    return out


def report_from_json(obj, where="report") -> CheckReport:
    try:
        ce = obj.get("counterexample")
        counter = None
        if ce is not None:
            counter = Counterexample(
                ce["identity"],
                {k: matrix_from_json(v, f"{where}.counterexample.{k}") for k, v in ce["matrices"].items()},
                float("inf") if ce["residual"] is None else float(ce["residual"]),
            )
        return CheckReport(
            check=obj["check"],
            verdict=obj["verdict"],
            trials=int(obj["trials"]),
            max_residual=float("inf") if obj["max_residual"] is None else float(obj["max_residual"]),
            seed=obj["seed"],
            tolerance=float(obj["tolerance"]),
            counterexample=counter,
            notes=list(obj.get("notes", [])),
            details=dict(obj.get("details", {})),
        )
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise ParseError(f"{where}: malformed report ({exc})") from None


_ENCODERS = {
    "matrix": matrix_to_json,
    "map": map_to_json,
    "report": report_to_json,
    "canonical_form": form_to_json,
}
_DECODERS = {
    "matrix": matrix_from_json,
    "map": map_from_json,
    "report": report_from_json,
    "canonical_form": form_from_json,
}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def emit(value, kind: str) -> str:
    return dumps(_ENCODERS[kind](value))


def parse(text: str, kind: str, where: str | None = None):
    where = where or kind
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{where}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return _DECODERS[kind](obj, where)


def load(path_or_stream, kind: str):
    if hasattr(path_or_stream, "read"):
        return parse(path_or_stream.read(), kind, getattr(path_or_stream, "name", kind))
    path = Path(path_or_stream)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return parse(text, kind, str(path))


def load_matrix(arg: str) -> np.ndarray:
    """A matrix file, or the shorthand ``eij:n`` / ``I:n``."""
    m = _UNIT.match(arg)
    if m:
        i, j = (m.group(1), m.group(2)) if m.group(1) else (m.group(3), m.group(4))
        try:
            return unit(int(i), int(j), int(m.group(5)))
        except ValueError as exc:
            raise ParseError(f"{arg}: {exc}") from None
    m = _IDENT.match(arg)
    if m:
        return np.eye(int(m.group(1)), dtype=np.complex128)
    return load(arg, "matrix")

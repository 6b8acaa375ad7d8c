"""JSON encoding of period matrices, moduli points and twistor points.

Complex numbers are always ``{"re": float, "im": float}``. Floats are
written with :func:`repr`, which round-trips IEEE doubles exactly.
"""

from __future__ import annotations

import json

import numpy as np

from .moduli import BettiPoint, DeRhamPoint, DolbeaultPoint
from .period_matrix import PeriodMatrix, validate
from .twistor import TwistorLine, TwistorPoint


def cnum(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def cvec(values) -> list:
    return [cnum(z) for z in np.asarray(values).reshape(-1)]


def parse_cnum(obj) -> complex:
    if isinstance(obj, dict):
        if set(obj) - {"re", "im"}:
            raise ValueError(f"unexpected keys in complex number: {sorted(obj)}")
        return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(obj)
    raise ValueError(f"not a complex number: {obj!r}")


def parse_cvec(obj) -> np.ndarray:
    if not isinstance(obj, list):
        raise ValueError("complex vector must be a JSON list")
    return np.array([parse_cnum(z) for z in obj], dtype=complex)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# --- period matrices ----------------------------------------------------------------

def period_matrix_to_json(P) -> dict:
    Pi = P.Pi if isinstance(P, PeriodMatrix) else np.asarray(P, dtype=complex)
    return {"k": Pi.shape[0], "Pi": [cvec(row) for row in Pi]}


def period_matrix_from_json(obj) -> np.ndarray:
    """Raw (unvalidated) matrix from ``{"k": int, "Pi": [[...], ...]}``."""
    if not isinstance(obj, dict) or "Pi" not in obj:
        raise ValueError("period matrix JSON needs a 'Pi' field")
    rows = obj["Pi"]
    if not isinstance(rows, list) or not rows:
        raise ValueError("'Pi' must be a non-empty list of rows")
    Pi = np.array([parse_cvec(row) for row in rows], dtype=complex)
    if Pi.ndim != 2 or Pi.shape[0] != Pi.shape[1]:
        raise ValueError("'Pi' must be square")
    if "k" in obj and int(obj["k"]) != Pi.shape[0]:
        raise ValueError(f"k={obj['k']} does not match a {Pi.shape[0]}x{Pi.shape[0]} matrix")
    return Pi


def load_period_matrix(path) -> PeriodMatrix:
    with open(path) as fh:
        return validate(period_matrix_from_json(json.load(fh)))


# --- moduli points -------------------------------------------------------------------

_FIELDS = {
    "betti": (BettiPoint, ("rhoA", "rhoB")),
    "derham": (DeRhamPoint, ("a", "b")),
    "dolbeault": (DolbeaultPoint, ("q", "p")),
}


def point_to_json(x) -> dict:
    _, fields = _FIELDS[x.system]
    out = {"system": x.system, "k": x.k}
    for name in fields:
        out[name] = cvec(getattr(x, name))
    return out


def point_from_json(obj):
    if not isinstance(obj, dict):
        raise ValueError("moduli point must be a JSON object")
    system = obj.get("system")
    if system not in _FIELDS:
        raise ValueError(f"unknown system {system!r}")
    cls, fields = _FIELDS[system]
    values = [parse_cvec(obj[name]) for name in fields]
    x = cls(*values)
    if "k" in obj and int(obj["k"]) != x.k:
        raise ValueError(f"k={obj['k']} does not match vectors of length {x.k}")
    return x


def load_point(path):
    with open(path) as fh:
        return point_from_json(json.load(fh))


# --- twistor points ------------------------------------------------------------------

def twistor_point_to_json(pt: TwistorPoint) -> dict:
    return {"chart": pt.chart, "base": cnum(pt.base), "v": cvec(pt.v)}


def twistor_point_from_json(obj) -> TwistorPoint:
    if not isinstance(obj, dict):
        raise ValueError("twistor point must be a JSON object")
    return TwistorPoint(int(obj["chart"]), parse_cvec(obj["v"]), parse_cnum(obj["base"]))


def twistor_line_to_json(line: TwistorLine) -> dict:
    return {"v0": cvec(line.v0)}

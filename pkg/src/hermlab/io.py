"""JSON formats for coefficients, sampled fields, symbols and norm records.

Floats are written with Python's shortest round-trip repr, so finite doubles
survive a dump/load cycle bit for bit.  Infinite exponents are written as the
string "inf".
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import DimensionMismatchError
from .hermite_basis import Grid, GridField, HermiteCoeffs
from .special_hermite import PlaneField
from .symbols import SpectralSymbol
from .timefreq import PhasePlaneField

__all__ = [
    "coeffs_to_json",
    "coeffs_from_json",
    "field_to_json",
    "field_from_json",
    "norm_record",
    "exponent_to_json",
    "exponent_from_json",
    "to_json",
    "from_json",
    "dump",
    "load",
    "dumps",
]


def exponent_to_json(p: float):
    return "inf" if math.isinf(p) else float(p)


def exponent_from_json(p) -> float:
    return float(p)  # float("inf") parses the string form


def coeffs_to_json(c: HermiteCoeffs) -> dict:
    entries = [
        {"alpha": list(alpha), "re": val.real, "im": val.imag}
        for alpha, val in c.items()
        if val != 0
    ]
    return {"d": c.d, "N": c.N, "entries": entries}


def coeffs_from_json(obj: dict) -> HermiteCoeffs:
    d, N = int(obj["d"]), int(obj["N"])
    pairs = [(e["alpha"], complex(e["re"], e["im"])) for e in obj["entries"]]
    return HermiteCoeffs.from_entries(d, N, pairs)


def _values_json(vals: np.ndarray) -> list:
    flat = vals.ravel()
    return [[float(v.real), float(v.imag)] for v in flat]


def _values_from(obj) -> np.ndarray:
    arr = np.asarray(obj, dtype=float).reshape(-1, 2)
    return arr[:, 0] + 1j * arr[:, 1]


def field_to_json(F) -> dict:
    """GridField, PlaneField or PhasePlaneField in the shared grid-field schema."""
    if isinstance(F, PhasePlaneField):
        out = {
            "kind": "phase_plane",
            "d": 2 * F.d,
            "L": F.x_grid.L,
            "n": F.x_grid.n,
            "L_y": F.y_grid.L,
            "n_y": F.y_grid.n,
            "axes": F.axes,
        }
    elif isinstance(F, PlaneField):
        out = {"kind": "plane", "d": F.grid.d, "L": F.grid.L, "n": F.grid.n, "axes": F.axes}
    elif isinstance(F, GridField):
        out = {"d": F.grid.d, "L": F.grid.L, "n": F.grid.n}
    else:
        raise TypeError(f"cannot serialize {type(F).__name__}")
    out["values"] = _values_json(F.values)
    return out


def field_from_json(obj: dict):
    d, L, n = int(obj["d"]), float(obj["L"]), int(obj["n"])
    vals = _values_from(obj["values"])
    kind = obj.get("kind", "plane" if "axes" in obj else "grid")
    if kind == "phase_plane":
        if d % 2:
            raise DimensionMismatchError("phase-plane field needs an even axis count")
        xg = Grid(d // 2, L, n)
        yg = Grid(d // 2, float(obj.get("L_y", L)), int(obj.get("n_y", n)))
        return PhasePlaneField(xg, yg, vals)
    if kind == "plane":
        return PlaneField(Grid(d, L, n), vals)
    return GridField(Grid(d, L, n), vals)


def norm_record(p: float, q: float, value: float, **extra) -> dict:
    rec = {"space": "M", "p": exponent_to_json(p), "q": exponent_to_json(q), "value": float(value)}
    rec.update(extra)
    return rec


def to_json(obj) -> dict:
    if isinstance(obj, HermiteCoeffs):
        return coeffs_to_json(obj)
    if isinstance(obj, (GridField, PhasePlaneField)):
        return field_to_json(obj)
    if isinstance(obj, SpectralSymbol):
        return obj.to_json()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_json(obj: dict):
    """Dispatch on the keys: coefficients, symbols or fields."""
    if "entries" in obj:
        return coeffs_from_json(obj)
    if "family" in obj:
        return SpectralSymbol.from_json(obj)
    if "values" in obj:
        return field_from_json(obj)
    raise ValueError("unrecognized JSON document")


def dumps(obj) -> str:
    data = obj if isinstance(obj, (dict, list)) else to_json(obj)
    return json.dumps(data, sort_keys=True, allow_nan=False)


def dump(obj, path) -> None:
    Path(path).write_text(dumps(obj) + "\n")


def load(path):
    return from_json(json.loads(Path(path).read_text()))

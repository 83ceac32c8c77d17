"""Signal and decomposition file formats.

Signals are single-column CSV (one value per line, optional header) or a
JSON array.  Decompositions are JSON objects whose ``details`` map carries
explicit scale labels ``"1"`` (finest) to ``"J"``.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .coeffs import LRHDecomposition, parse_family
from .haar import HaarDecomposition


def fmt(value: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    return format(float(value), ".17g")


def _guess_format(path, fmt_hint):
    if fmt_hint:
        return fmt_hint
    return "json" if str(path).lower().endswith(".json") else "csv"


def read_signal(path, format: str | None = None) -> np.ndarray:
    path = Path(path)
    if _guess_format(path, format) == "json":
        data = json.loads(path.read_text())
        if isinstance(data, dict):
            data = data.get("values", data.get("signal"))
        return np.asarray(data, dtype=float)
    values = []
    with path.open(newline="") as fh:
        for row_no, row in enumerate(csv.reader(fh), start=1):
            if not row or not row[0].strip():
                continue
            try:
                values.append(float(row[0]))
            except ValueError:
                if row_no == 1 and not values:
                    continue  # header
                raise ValueError(f"{path}:{row_no}: not a number: {row[0]!r}") from None
    return np.asarray(values, dtype=float)


def signal_to_text(values, format: str = "csv") -> str:
    values = np.asarray(values, dtype=float)
    if format == "json":
        return "[" + ", ".join(fmt(v) for v in values) + "]\n"
    return "".join(fmt(v) + "\n" for v in values)


def write_signal(path, values, format: str | None = None) -> None:
    Path(path).write_text(signal_to_text(values, _guess_format(path, format)))


def decomposition_to_dict(dec) -> dict:
    if isinstance(dec, LRHDecomposition):
        levels, kind = dec.g, "lrh"
    elif isinstance(dec, HaarDecomposition):
        levels, kind = dec.details, "haar"
    else:
        raise TypeError(f"cannot serialise {type(dec).__name__}")
    out = {
        "kind": kind,
        "n": dec.n,
        "details": {str(j): [float(c) for c in level] for j, level in enumerate(levels, start=1)},
        "smooth_top": float(dec.smooth_top),
    }
    if kind == "lrh":
        out["family"] = str(dec.family)
    return out


def decomposition_from_dict(data: dict):
    n = int(data["n"])
    J = len(data["details"])
    levels = tuple(np.asarray(data["details"][str(j)], dtype=float) for j in range(1, J + 1))
    if data.get("kind") == "lrh" or "family" in data:
        return LRHDecomposition(levels, float(data["smooth_top"]), n, parse_family(data["family"]))
    return HaarDecomposition(levels, float(data["smooth_top"]), n)


def dump_json(obj) -> str:
    """JSON text; floats use Python's shortest round-trip repr, NaN/inf become null."""
    return json.dumps(_plain(obj), indent=2) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return value if np.isfinite(value) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj

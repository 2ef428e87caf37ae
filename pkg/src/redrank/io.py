"""JSON file formats.

Matrix: ``{"rows": m, "cols": n, "data": [[[re, im], ...], ...]}``; each
component may be a number or a rational string such as ``"-1/12"``.
Spectrum: ``{"values": ["3/4", "1/4"]}`` (rational strings or decimals).
Kraus list: ``{"m": m, "n": n, "operators": [<matrix>, ...]}`` or a bare array.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .channels import KrausRep
from .feasibility import as_spectrum


class FormatError(ValueError):
    pass


def _num(x):
    if isinstance(x, bool):
        raise FormatError(f"boolean is not a number: {x!r}")
    if isinstance(x, (int, float)):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise FormatError(f"bad number {x!r}") from exc
    raise FormatError(f"bad number {x!r}")


def _entry(e):
    if isinstance(e, list):
        if len(e) != 2:
            raise FormatError(f"complex entry must be [re, im], got {e!r}")
        return _num(e[0]), _num(e[1])
    return _num(e), 0


def matrix_from_json(obj, exact: bool = False) -> np.ndarray:
    """Parse a matrix object; ``exact=True`` gives a Fraction array (real entries only)."""
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"matrix object needs rows, cols and data: {exc}") from exc
    if len(data) != rows or any(len(row) != cols for row in data):
        raise FormatError(f"data does not have shape {rows}x{cols}")
    entries = [[_entry(e) for e in row] for row in data]
    if exact:
        out = np.empty((rows, cols), dtype=object)
        for i, row in enumerate(entries):
            for j, (re, im) in enumerate(row):
                if im != 0:
                    raise FormatError("exact loading supports real matrices only")
                out[i, j] = Fraction(re)
        return out
    return np.array([[complex(float(re), float(im)) for re, im in row] for row in entries], dtype=complex)


def matrix_to_json(A) -> dict:
    A = np.asarray(A)
    if A.dtype == object:
        data = [[[str(Fraction(x)), "0"] for x in row] for row in A]
    else:
        A = A.astype(complex)
        data = [[[float(x.real), float(x.imag)] for x in row] for row in A]
    return {"rows": int(A.shape[0]), "cols": int(A.shape[1]), "data": data}


def spectrum_from_json(obj) -> tuple:
    try:
        values = obj["values"]
    except (KeyError, TypeError) as exc:
        raise FormatError("spectrum object needs a 'values' list") from exc
    if not isinstance(values, list):
        raise FormatError("'values' must be a list")
    return as_spectrum([v if isinstance(v, str) else _num(v) for v in values])


def spectrum_to_json(values) -> dict:
    return {"values": [str(Fraction(v)) for v in values]}


def kraus_from_json(obj) -> KrausRep:
    """Accepts the object form or a bare array of matrices."""
    if isinstance(obj, list):
        if not obj:
            raise FormatError("empty Kraus list")
        ops = [matrix_from_json(F) for F in obj]
        obj = {"m": ops[0].shape[1], "n": ops[0].shape[0], "operators": obj}
    try:
        return KrausRep(int(obj["m"]), int(obj["n"]), [matrix_from_json(F) for F in obj["operators"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"Kraus object needs m, n and operators: {exc}") from exc


def kraus_to_json(k: KrausRep) -> dict:
    return {"m": k.m, "n": k.n, "operators": [matrix_to_json(F) for F in k.operators]}


def read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read JSON from {path}: {exc}") from exc


def _float17(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite float in output")
    s = format(x, ".17g")
    if not any(ch in s for ch in ".eE"):
        s += ".0"
    return s


def dumps(obj, indent: int | None = None, _level: int = 0) -> str:
    """Deterministic JSON with floats written to 17 significant digits."""
    nl = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float17(float(obj))
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [nl + json.dumps(str(k)) + ": " + dumps(v, indent, _level + 1) for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # keep innermost numeric lists on one line
        if indent is not None and all(not isinstance(v, (list, tuple, dict)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[" + sep.join(nl + dumps(v, indent, _level + 1) for v in obj) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj, indent=1) + "\n", encoding="utf-8")

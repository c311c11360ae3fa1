"""Deterministic JSON and CSV serialization for matrices, states and reports."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

__all__ = ["dumps_json", "matrix_to_csv", "matrix_from_json", "report_table_csv", "state_to_dict"]


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x + 0.0, ".17g")  # + 0.0 folds -0.0
    return text if ("." in text or "e" in text) else text + ".0"


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(x, (dict, list, tuple, np.ndarray)) for x in obj):
            return "[" + ", ".join(_encode(x, indent, level + 1) for x in obj) + "]"
        items = [pad + _encode(x, indent, level + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj, indent: int = 2) -> str:
    """JSON with every float written to 17 significant digits.

    Identical inputs always give byte-identical text.
    """
    return _encode(obj, indent, 0) + "\n"


def matrix_from_json(text: str) -> np.ndarray:
    M = np.array(json.loads(text), dtype=float)
    if M.ndim != 2:
        raise ValueError("expected a JSON array of arrays")
    return M


def matrix_to_csv(M) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in np.atleast_2d(np.asarray(M, dtype=float)):
        writer.writerow([_float(float(x)) for x in row])
    return buf.getvalue()


def report_table_csv(report) -> str:
    """Variance-vs-r table with columns ``r, nullifier_id, variance, fitted_exponent``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "nullifier_id", "variance", "fitted_exponent"])
    for r, label, v, slope in report.rows():
        writer.writerow([_float(r), label, _float(v), _float(slope)])
    return buf.getvalue()


def state_to_dict(state) -> dict:
    return {"modes": state.n, "ordering": "Q1..Qn,P1..Pn", "cov": state.cov, "mean": state.mean}

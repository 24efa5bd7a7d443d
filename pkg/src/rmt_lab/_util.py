"""Shared plumbing: error types, rational formatting, interval sets, JSON/CSV helpers."""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import asdict, dataclass, field, is_dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np


class NumericalError(RuntimeError):
    """A numerical routine failed to meet its tolerance.

    ``diagnostics`` carries a JSON-serialisable record of what was tried.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


@dataclass
class Diagnostics:
    """Metadata attached to a determinant or quadrature evaluation."""

    method: str
    size: int = 0
    estimated_error: float = float("nan")
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(to_jsonable(self), sort_keys=True)


def format_rational(x: Fraction | int) -> str:
    """Serialise an exact rational as ``"p/q"``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


def to_jsonable(obj: Any) -> Any:
    """Convert numpy scalars, rationals, mpmath numbers and dataclasses for ``json``."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return {k: to_jsonable(v) for k, v in asdict(obj).items()}
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return _float(float(obj))
    if isinstance(obj, float):
        return _float(obj)
    if type(obj).__module__.startswith("mpmath"):
        return _float(float(obj))
    return obj


def _float(x: float):
    if math.isfinite(x):
        return x
    return str(x)


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True)


def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _csv_cell(v: Any) -> Any:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if type(v).__module__.startswith("mpmath"):
        return repr(float(v))
    return v


def max_threads() -> int:
    """Parallelism cap from ``RMT_LAB_THREADS`` (default 1)."""
    raw = os.environ.get("RMT_LAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


# -- interval unions ------------------------------------------------------

Interval = tuple[float, float]


def normalize_intervals(E: Iterable[Sequence[float]] | None) -> list[Interval]:
    """Sort and merge a union of closed intervals; empty pieces are dropped."""
    if E is None:
        return []
    pieces = []
    for piece in E:
        a, b = float(piece[0]), float(piece[1])
        if a > b:
            raise ValueError(f"interval ({a}, {b}) has a > b")
        if a < b:
            pieces.append((a, b))
    pieces.sort()
    out: list[Interval] = []
    for a, b in pieces:
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def intersect_intervals(E: list[Interval], lo: float, hi: float) -> list[Interval]:
    out = []
    for a, b in E:
        a2, b2 = max(a, lo), min(b, hi)
        if a2 < b2:
            out.append((a2, b2))
    return out


def complement_intervals(E: list[Interval], lo: float, hi: float) -> list[Interval]:
    """Complement of ``E`` inside ``[lo, hi]``."""
    out = []
    cur = lo
    for a, b in intersect_intervals(E, lo, hi):
        if a > cur:
            out.append((cur, a))
        cur = max(cur, b)
    if cur < hi:
        out.append((cur, hi))
    return out


def gauss_legendre_panels(intervals: list[Interval], order: int = 40, width: float = 1.0):
    """Composite Gauss-Legendre nodes/weights over a union of finite intervals."""
    x0, w0 = np.polynomial.legendre.leggauss(order)
    xs, ws = [], []
    for a, b in intervals:
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("panels need finite intervals")
        npan = max(1, int(math.ceil((b - a) / width)))
        edges = np.linspace(a, b, npan + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            half = 0.5 * (hi - lo)
            xs.append(0.5 * (hi + lo) + half * x0)
            ws.append(half * w0)
    if not xs:
        return np.empty(0), np.empty(0)
    return np.concatenate(xs), np.concatenate(ws)

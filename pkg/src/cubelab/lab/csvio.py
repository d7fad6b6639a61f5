"""The fixed CSV schema shared by every subcommand.

Columns: ``tag, k, N, H, L, seed, value, oracle, gap, ratio, rigorous, pass``.
Sweep rows store the cube average in ``value`` and the limit in
``oracle``.  Inequality rows store ``lhs`` in ``value`` and ``rhs`` in
``oracle``, with ``gap = rhs - lhs``.  ``pass`` is false only for a
violated rigorous bound (or a failed van der Corput chain on eq4 rows).
"""
from __future__ import annotations

import csv
import io
import math

COLUMNS = ("tag", "k", "N", "H", "L", "seed", "value", "oracle", "gap", "ratio", "rigorous", "pass")


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        v = float(v)  # numpy scalars repr as np.float64(...)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def report_row(report, seed=None):
    p = report.parameters
    return {
        "tag": report.tag if "variant" not in p else f"{report.tag}:{p['variant']}",
        "k": p.get("k"),
        "N": p.get("N"),
        "H": p.get("H"),
        "L": p.get("L"),
        "seed": p.get("seed", seed),
        "value": float(report.lhs),
        "oracle": float(report.rhs),
        "gap": float(report.rhs - report.lhs),
        "ratio": float(report.ratio),
        "rigorous": bool(report.rigorous),
        "pass": bool(report.passed and p.get("vdc_ok", True)),
    }


def trace_rows(trace, H=None, L=None):
    rows = []
    for N, value in trace.points:
        oracle = trace.oracle_limit
        rows.append({
            "tag": trace.experiment_id,
            "k": trace.k,
            "N": N,
            "H": H,
            "L": L,
            "seed": trace.seed,
            "value": value,
            "oracle": oracle,
            "gap": None if oracle is None else abs(value - oracle),
            "ratio": None,
            "rigorous": False,
            "pass": True,
        })
    return rows


def dumps(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in COLUMNS])
    return buf.getvalue()


def _parse(col, text):
    if text == "":
        return None
    if col == "tag":
        return text
    if col in ("rigorous", "pass"):
        return text == "true"
    if col in ("k", "N", "H", "L", "seed"):
        return int(text)
    return float(text)


def loads(text):
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != COLUMNS:
        raise ValueError(f"unexpected CSV header {header!r}")
    return [{c: _parse(c, v) for c, v in zip(COLUMNS, row)} for row in reader if row]


def read(path):
    with open(path, newline="") as fh:
        return loads(fh.read())

"""CSV and JSON writers. Output is deterministic and written atomically."""
from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np

from .gfield import component_profile


def _atomic_write(path, text):
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from exc


def fmt(x):
    """17 significant digits: enough to round-trip any double."""
    return format(float(x), ".17g")


def trace_table(trace, fd, gft, basis="rectifying"):
    """Header and rows for the per-node export."""
    n = fd.dim
    prof = component_profile(gft.xi_g, fd, basis)
    ncurv = fd.curvatures.shape[1]
    header = (["s"] + [f"x{i}" for i in range(1, n + 1)] + ["G"]
              + [f"xg{i}" for i in range(1, n + 1)] + [f"k{i}" for i in range(1, ncurv + 1)]
              + prof.names())
    cols = np.column_stack([trace.s_grid, trace.points, gft.G_values, gft.xi_g,
                            fd.curvatures, prof.coeffs])
    return header, cols


def write_trace_csv(trace, fd, gft, path, basis="rectifying"):
    header, cols = trace_table(trace, fd, gft, basis)
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in cols]
    _atomic_write(path, "\n".join(lines) + "\n")


def read_trace_csv(path):
    """Header and float array of a file written by :func:`write_trace_csv`."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(",")
        rows = [[float(v) for v in line.split(",")] for line in fh if line.strip()]
    return header, np.array(rows)


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def report_dict(report):
    notes = list(report.notes)
    if report.c_squared is not None:
        notes.append(f"c_squared={fmt(report.c_squared)}")
    return {
        "theorem": report.theorem.value,
        "identities": [
            {"label": i.label, "eq": i.eq, "max_residual": _num(i.max_residual),
             "mean_residual": _num(i.mean_residual), "verdict": i.verdict.value}
            for i in report.identities
        ],
        "c_estimate": _num(report.c_estimate),
        "grid": {"n": report.grid.get("n"), "h": _num(report.grid.get("h")),
                 "range": [_num(v) for v in report.grid.get("range", [])]},
        "notes": notes,
    }


def audit_json(report):
    return json.dumps(report_dict(report), indent=2, allow_nan=False) + "\n"


def write_audit_json(report, path):
    _atomic_write(path, audit_json(report))


def frames_table(fd):
    """Per-node frame vectors flattened row by row (T, N, B1, ...)."""
    n = fd.dim
    names = ["T", "N"] + [f"B{i}" for i in range(1, n - 1)]
    header = ["s"] + [f"{v}_{k}" for v in names for k in range(1, n + 1)]
    cols = np.column_stack([fd.s_grid, fd.frames.reshape(len(fd.s_grid), n * n)])
    return header, cols


def write_frames_csv(fd, path):
    header, cols = frames_table(fd)
    lines = [",".join(header)] + [",".join(fmt(v) for v in row) for row in cols]
    _atomic_write(path, "\n".join(lines) + "\n")


def write_points_csv(trace, path):
    n = trace.points.shape[1]
    lines = ["s," + ",".join(f"x{i}" for i in range(1, n + 1))]
    lines += [",".join(fmt(v) for v in row) for row in np.column_stack([trace.s_grid, trace.points])]
    _atomic_write(path, "\n".join(lines) + "\n")

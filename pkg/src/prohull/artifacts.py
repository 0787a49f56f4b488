"""Deterministic CSV/JSON artifact writers shared by the CLI and tests.

Floats are serialized with repr (shortest round-trip form), rows in canonical
cell order, so identical configs produce byte-identical artifacts; wall-clock
data lives only in the run manifest.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .extremal import ExtremalResult
from .jensen import GreenProblem
from .scanner import ScanField


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


EXTREMAL_CSV_HEADER_BASE = ["d", "lam_lo", "lam_hi", "status"]


def extremal_rows(results: Sequence[ExtremalResult], n: int) -> tuple[list, list]:
    header = [f"re_z{i}" for i in range(1, n + 1)] + [f"im_z{i}" for i in range(1, n + 1)]
    header += EXTREMAL_CSV_HEADER_BASE
    rows = []
    for r in results:
        rep = r.x.rep
        if abs(rep[0]) > 1e-12:
            z = rep[1:] / rep[0]
        else:
            z = np.full(n, np.nan, dtype=complex)
        rows.append([*(c.real for c in z), *(c.imag for c in z),
                     r.d, r.lam_lo, r.lam_hi, r.status])
    return header, rows


def write_extremal_csv(path: Path, results: Sequence[ExtremalResult], n: int) -> None:
    header, rows = extremal_rows(results, n)
    write_csv(path, header, rows)


def write_scan_csv(path: Path, field: ScanField, n: int) -> None:
    """One row per (cell, degree) in canonical cell order, plus a sidecar
    JSON manifest with the scan parameters and the K fingerprint."""
    header = [f"re_z{i}" for i in range(1, n + 1)] + [f"im_z{i}" for i in range(1, n + 1)]
    header += ["d", "lam_lo", "lam_hi", "status", "classification"]
    rows = []
    for cell in field.cells:
        for r in cell.results:
            rows.append([*(c.real for c in cell.z), *(c.imag for c in cell.z),
                         r.d, r.lam_lo, r.lam_hi, r.status, cell.classification])
    write_csv(path, header, rows)


def scan_manifest(field: ScanField, k_fingerprint: str) -> dict:
    return {
        "chart": field.chart,
        "grid": {"kind": field.grid.kind, "params": _plain(field.grid.params)},
        "degrees": list(field.degrees),
        "thresholds": dict(field.thresholds),
        "k_fingerprint": k_fingerprint,
    }


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    return obj


def compactum_fingerprint(K) -> str:
    reps = K.reps()
    blob = np.ascontiguousarray(reps.view(float)).tobytes()
    return hashlib.sha256(blob).hexdigest()[:16]


def write_green_csv(path: Path, problem: GreenProblem) -> None:
    Z = problem.surface.nodes()
    w = problem.surface.weights(Z)
    header = ["re_z", "im_z", "u", "weight"]
    rows = []
    for (i, j) in zip(*np.where(problem.u != 0.0)):
        rows.append([Z[i, j].real, Z[i, j].imag, problem.u[i, j], w[i, j]])
    write_csv(path, header, rows)

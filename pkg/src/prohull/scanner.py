"""Grid scans, divergence classification, and the harmonicity residual probe.

A scan fills a grid of chart points with per-degree lam brackets and
classifies each cell's stream.  Finite-degree truncation cannot separate a
finite extremal function from slow divergence, so the thresholds are
engineering choices (documented defaults calibrated on the circle geometry),
and every classification is evidence about the discretized problem only.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import ceil
from typing import Callable, Optional, Sequence

import numpy as np

from .compacta import ProjectivePoint, SampledCompactum
from .extremal import BRACKETED, INTERPOLATION, ExtremalResult, truncated_extremal

CONVERGED = "converged"
DIVERGING = "diverging"
INCONCLUSIVE = "inconclusive"

DEFAULT_TAU_CONV = 0.02
DEFAULT_TAU_GROW = 0.1
ON_K_TOL = 1e-6


@dataclass(frozen=True)
class GridSpec:
    """Either a cartesian grid over a 1-dimensional chart coordinate or an
    explicit list of affine points (vectors in C^n)."""

    kind: str  # "cartesian" | "points"
    params: dict = field(default_factory=dict)

    def cells(self, n: int) -> list[np.ndarray]:
        if self.kind == "cartesian":
            if n != 1:
                raise ValueError("cartesian grid spec requires a 1-dimensional chart")
            p = self.params
            re = np.linspace(p["re_min"], p["re_max"], int(p["steps"]))
            im = np.linspace(p["im_min"], p["im_max"], int(p["steps"]))
            return [np.array([complex(a, b)]) for a in re for b in im]
        if self.kind == "points":
            return [np.atleast_1d(np.asarray(q, dtype=complex)) for q in self.params["points"]]
        raise ValueError(f"unknown grid spec kind {self.kind!r}")


@dataclass(frozen=True)
class ScanCell:
    z: np.ndarray
    results: tuple
    classification: str
    on_k: bool


@dataclass(frozen=True)
class ScanField:
    chart: str
    grid: GridSpec
    degrees: tuple
    thresholds: dict
    cells: tuple

    def classifications(self) -> list[str]:
        return [c.classification for c in self.cells]


def classify(brackets, tau_conv: float = DEFAULT_TAU_CONV,
             tau_grow: float = DEFAULT_TAU_GROW) -> str:
    """Classify a per-degree bracket stream.

    brackets: sequence of (d, lam_lo, lam_hi, status) or ExtremalResult.
    Converged: lam_lo varies at most tau_conv over the top half of the
    degree ladder and lam_hi stays finite there.  Diverging: lam_lo grows at
    least tau_grow per degree doubling (least-squares slope against log2 d)
    over the top half.  Anything else is inconclusive; fewer than two usable
    rungs is inconclusive, or interpolation_regime when that is the cause.
    """
    rows = []
    saw_interp = False
    for b in brackets:
        if isinstance(b, ExtremalResult):
            d, lo, hi, status = b.d, b.lam_lo, b.lam_hi, b.status
        else:
            d, lo, hi, status = b
        if status == BRACKETED and np.isfinite(lo):
            rows.append((d, lo, hi))
        elif status == INTERPOLATION:
            saw_interp = True
    if len(rows) < 2:
        return INTERPOLATION if saw_interp else INCONCLUSIVE
    rows.sort()
    top = rows[-max(2, ceil(len(rows) / 2)):]
    lam_lo = np.array([r[1] for r in top])
    lam_hi = np.array([r[2] for r in top])
    if lam_lo.max() - lam_lo.min() <= tau_conv and np.isfinite(lam_hi).all():
        return CONVERGED
    logd = np.log2([r[0] for r in top])
    slope = float(np.polyfit(logd, lam_lo, 1)[0]) if len(set(logd)) > 1 else 0.0
    if slope >= tau_grow:
        return DIVERGING
    return INCONCLUSIVE


def scan(K: SampledCompactum, chart: str, grid: GridSpec, degrees: Sequence[int],
         thresholds: Optional[dict] = None, m_con: int = 64, m_obj: int = 64,
         threads: int = 1) -> ScanField:
    """Fill the grid with extremal brackets and classify every cell.

    Cell order in the output is the deterministic grid order regardless of
    the worker count.  Cells within ON_K_TOL of a sample inherit the on-K
    labeling (converged) to avoid spurious divergence on K itself.
    """
    degrees = list(degrees)
    if not degrees:
        raise ValueError("empty degree list")
    th = {"tau_conv": DEFAULT_TAU_CONV, "tau_grow": DEFAULT_TAU_GROW}
    th.update(thresholds or {})
    cells_z = grid.cells(K.n)

    def work(z):
        x = ProjectivePoint.from_affine(z, K.n)
        results = tuple(truncated_extremal(K, x, d, m_con, m_obj) for d in degrees)
        on_k = K.min_chordal_distance(x) <= ON_K_TOL
        cls = CONVERGED if on_k else classify(results, th["tau_conv"], th["tau_grow"])
        return ScanCell(z=z, results=results, classification=cls, on_k=on_k)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            cells = list(ex.map(work, cells_z))
    else:
        cells = [work(z) for z in cells_z]
    return ScanField(chart=chart, grid=grid, degrees=tuple(degrees),
                     thresholds=th, cells=tuple(cells))


def discrete_laplacian(f: Callable[[complex], float], t: complex, h: float) -> float:
    """Five-point Laplacian of a scalar field of one complex parameter."""
    return (f(t + h) + f(t - h) + f(t + 1j * h) + f(t - 1j * h) - 4.0 * f(t)) / h**2


def harmonicity_residual(K: SampledCompactum, param: Callable[[complex], np.ndarray],
                         centers: Sequence[complex], h: float, d: int,
                         m_con: int = 64, m_obj: int = 64,
                         min_distance: float = ON_K_TOL) -> dict:
    """Max five-point Laplacian residual of the chart-corrected extremal field.

    The probed field is lam_mid + (1/2) log(1 + ||z||^2) along the
    holomorphic parametrization (constant normalization offsets drop out of
    the stencil).  Every stencil point must stay clear of K; a grid that
    touches K is rejected.
    """
    if h <= 0:
        raise ValueError("need h > 0")
    cache: dict = {}

    def field_at(t: complex) -> float:
        key = (round(t.real, 12), round(t.imag, 12))
        if key not in cache:
            z = np.atleast_1d(np.asarray(param(t), dtype=complex))
            x = ProjectivePoint.from_affine(z, K.n)
            if K.min_chordal_distance(x) <= min_distance:
                raise ValueError(f"grid touches K at parameter {t}")
            res = truncated_extremal(K, x, d, m_con, m_obj)
            if res.status != BRACKETED:
                raise ValueError(f"extremal bracket unavailable at parameter {t}: {res.status}")
            cache[key] = res.lam_mid + 0.5 * np.log(1.0 + float(np.linalg.norm(z)) ** 2)
        return cache[key]

    residuals = [abs(discrete_laplacian(field_at, t, h)) for t in centers]
    return {
        "h": h,
        "d": d,
        "centers": list(centers),
        "residuals": residuals,
        "max_residual": max(residuals) if residuals else 0.0,
    }

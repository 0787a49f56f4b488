"""Finite sample clouds on P^n with the example-curve generators.

A compactum is always a finite, duplicate-free list of unit homogeneous
representatives; everything downstream treats results as evidence about the
discretized problem, never as statements about the continuum set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Optional

import numpy as np

PHASE_TOL = 1e-12
DUPLICATE_TOL = 1e-12


class GeometryError(ValueError):
    pass


def _canonicalize(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    nz = np.linalg.norm(v)
    if nz == 0:
        raise GeometryError("zero representative")
    v = v / nz
    idx = int(np.argmax(np.abs(v) > PHASE_TOL))
    ph = v[idx] / abs(v[idx])
    return v * np.conj(ph)


@dataclass(frozen=True)
class ProjectivePoint:
    """Unit representative with canonical phase (first nonzero entry > 0)."""

    rep: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "rep", _canonicalize(self.rep))

    @property
    def n(self) -> int:
        return len(self.rep) - 1

    def chordal_distance(self, other: "ProjectivePoint") -> float:
        ip = abs(np.vdot(self.rep, other.rep))
        return float(np.sqrt(max(0.0, 1.0 - min(ip, 1.0) ** 2)))

    @staticmethod
    def from_affine(z, n: Optional[int] = None) -> "ProjectivePoint":
        """[1 : z_1 : ... : z_n], zero-padded to dimension n if given."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if n is not None and len(z) < n:
            z = np.concatenate([z, np.zeros(n - len(z), dtype=complex)])
        return ProjectivePoint(np.concatenate([[1.0 + 0j], z]))


@dataclass(frozen=True)
class CurveGenerator:
    """Tagged description of the sampled geometry.

    kinds:
      circle_in_line   params: radius r (circle |z| = r in the chart of P^1)
      entire_graph     params: taylor (a_0..a_T), radius r  -> [1 : z : f(z)] in P^2
      gap_series_graph params: exponents n_k, coefficients c_k, radius r, lam
      torus_exp_curve  params: none (Segre image [1 : z : w : zw], |z| = 1,
                       w = exp(z + conj(z)))
      explicit_cloud   params: points (list of homogeneous representatives)
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind == "gap_series_graph":
            ns = list(self.params["exponents"])
            lam = float(self.params.get("lam", 0.0))
            if lam <= 1.0:
                raise GeometryError("gap series requires a recorded lam > 1")
            for a, b in zip(ns, ns[1:]):
                if not b > lam * a:
                    raise GeometryError(f"gap check failed: {b} <= lam*{a}")

    def to_json_dict(self) -> dict:
        params = dict(self.params)
        if self.kind == "explicit_cloud":
            params["points"] = [[[float(c.real), float(c.imag)] for c in np.asarray(p, complex)]
                                for p in params["points"]]
        return {"kind": self.kind, "params": params}


@dataclass(frozen=True)
class SampledCompactum:
    """Finite subset of P^n plus the generator it was sampled from."""

    n: int
    points: tuple
    generator: CurveGenerator
    orbit_size: int = 1

    def __post_init__(self):
        if not self.points:
            raise GeometryError("empty compactum")
        if self.orbit_size < 1:
            raise GeometryError("orbit_size must be >= 1")
        reps = self.reps()
        gram = np.abs(reps @ reps.conj().T)
        np.fill_diagonal(gram, 0.0)
        # identical unit vectors round to gram within one ulp of 1; the
        # chordal form sqrt(1 - gram^2) cannot resolve distances below ~1e-8
        if gram.size and 1.0 - gram.max() <= 1e-15:
            raise GeometryError("duplicate points in compactum")

    def reps(self) -> np.ndarray:
        return np.stack([p.rep for p in self.points])

    def min_chordal_distance(self, x: ProjectivePoint) -> float:
        ips = np.abs(self.reps() @ x.rep.conj())
        return float(np.sqrt(max(0.0, 1.0 - min(ips.max(), 1.0) ** 2)))

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "generator": self.generator.to_json_dict(),
            "orbit_size": self.orbit_size,
            "points": [[[float(c.real), float(c.imag)] for c in p.rep] for p in self.points],
        }


def _taylor_eval(coeffs, z):
    return sum(a * z**k for k, a in enumerate(coeffs))


def gap_series_eval(exponents, coefficients, z):
    return sum(c * z**n for n, c in zip(exponents, coefficients))


def sample(generator: CurveGenerator, count: int, orbit_size: int = 1) -> SampledCompactum:
    """Equispaced parameter sampling of a generator; deterministic."""
    if count < 8:
        raise GeometryError("need count >= 8")
    th = 2.0 * np.pi * np.arange(count) / count
    kind = generator.kind
    p = generator.params
    if kind == "circle_in_line":
        r = float(p["radius"])
        if r <= 0:
            raise GeometryError("radius must be positive")
        pts = [ProjectivePoint.from_affine([r * np.exp(1j * t)]) for t in th]
        n = 1
    elif kind == "entire_graph":
        r = float(p["radius"])
        a = [complex(x) for x in p["taylor"]]
        zs = r * np.exp(1j * th)
        pts = [ProjectivePoint.from_affine([z, _taylor_eval(a, z)]) for z in zs]
        n = 2
    elif kind == "gap_series_graph":
        r = float(p["radius"])
        ns = [int(x) for x in p["exponents"]]
        cs = [complex(x) for x in p["coefficients"]]
        zs = r * np.exp(1j * th)
        pts = [ProjectivePoint.from_affine([z, gap_series_eval(ns, cs, z)]) for z in zs]
        n = 2
    elif kind == "torus_exp_curve":
        zs = np.exp(1j * th)
        pts = [ProjectivePoint(np.array([1.0, z, np.exp(2 * z.real), z * np.exp(2 * z.real)], dtype=complex))
               for z in zs]
        n = 3
    elif kind == "explicit_cloud":
        raw = p["points"]
        pts = [ProjectivePoint(np.asarray(q, dtype=complex)) for q in raw]
        n = pts[0].n
    else:
        raise GeometryError(f"unknown generator kind {kind!r}")
    return SampledCompactum(n=n, points=tuple(pts), generator=generator, orbit_size=orbit_size)


def homogeneous_lift(K: SampledCompactum, N: int) -> np.ndarray:
    """Unit lift with full N-th-root-of-unity orbits: N rows per point.

    With N above the degree of any polynomial in play, the discrete circle
    average over each orbit recovers homogeneous components exactly.
    """
    if N < 1:
        raise GeometryError("need N >= 1")
    reps = K.reps()
    omega = np.exp(2j * np.pi * np.arange(N) / N)
    return (omega[None, :, None] * reps[:, None, :]).reshape(-1, K.n + 1)


def apply_unitary(K: SampledCompactum, U: np.ndarray) -> SampledCompactum:
    """Pointwise Fubini-Study isometry; reps are re-canonicalized."""
    U = np.asarray(U, dtype=complex)
    if U.shape != (K.n + 1, K.n + 1):
        raise GeometryError("unitary dimension mismatch")
    if np.linalg.norm(U.conj().T @ U - np.eye(K.n + 1)) > 1e-12 * (K.n + 1):
        raise GeometryError("matrix is not unitary to 1e-12")
    pts = tuple(ProjectivePoint(U @ p.rep) for p in K.points)
    return SampledCompactum(n=K.n, points=pts, generator=K.generator, orbit_size=K.orbit_size)


def default_orbit_size(max_degree: int) -> int:
    """2*(max degree in play) + 1 guarantees exact component extraction."""
    return 2 * max_degree + 1


def circle_compactum(count: int = 256, radius: float = 1.0) -> SampledCompactum:
    return sample(CurveGenerator("circle_in_line", {"radius": radius}), count)


def exp_graph_compactum(count: int = 200, radius: float = 0.5, terms: int = 40) -> SampledCompactum:
    taylor = [1.0 / factorial(k) for k in range(terms)]
    return sample(CurveGenerator("entire_graph", {"taylor": taylor, "radius": radius}), count)

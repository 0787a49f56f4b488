"""Dense (in)homogeneous complex polynomials over the graded monomial basis.

Coefficients are stored densely over a graded-lexicographic enumeration of
monomials, which keeps index arithmetic canonical and makes the Fubini-Study
section norm, circle-average component extraction and coefficient-space norms
straightforward to state and test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Callable, Sequence

import numpy as np

from .utils import kahan_sum

DEGREE_CAP = 64
COEFF_COUNT_CAP = 10**6


class PolynomialError(ValueError):
    pass


@dataclass(frozen=True)
class MultiIndex:
    """Exponent vector of a monomial Z^alpha in n+1 variables."""

    exponents: tuple

    @property
    def degree(self) -> int:
        return sum(self.exponents)


@lru_cache(maxsize=None)
def _enumerate_exponents(nvars: int, d: int) -> tuple:
    """All exponent tuples of length nvars with total degree exactly d,
    ordered lexicographically with the leading variable largest first."""
    if nvars == 1:
        return ((d,),)
    out = []
    for e in range(d, -1, -1):
        out.extend((e,) + rest for rest in _enumerate_exponents(nvars - 1, d - e))
    return tuple(out)


def enumerate_monomials(n: int, d: int) -> list[MultiIndex]:
    """Graded-lex basis of C[Z_0..Z_n]_d; length binomial(n+d, d)."""
    if n < 0 or d < 0:
        raise PolynomialError(f"need n >= 0 and d >= 0, got n={n}, d={d}")
    if d > DEGREE_CAP:
        raise PolynomialError(f"degree {d} exceeds cap {DEGREE_CAP}")
    if comb(n + d, d) > COEFF_COUNT_CAP:
        raise PolynomialError("coefficient count exceeds cap")
    return [MultiIndex(e) for e in _enumerate_exponents(n + 1, d)]


def enumerate_affine_monomials(n: int, d: int) -> list[MultiIndex]:
    """All exponent tuples of length n with total degree <= d, graded-lex:
    ascending total degree, lex within each degree."""
    if n < 1 or d < 0:
        raise PolynomialError(f"need n >= 1 and d >= 0, got n={n}, d={d}")
    out = []
    for k in range(d + 1):
        out.extend(MultiIndex(e) for e in _enumerate_exponents(n, k))
    return out


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """Dense degree-d homogeneous polynomial in Z_0..Z_n."""

    n: int
    d: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        expected = comb(self.n + self.d, self.d)
        if c.shape != (expected,):
            raise PolynomialError(
                f"coeff length {c.shape} does not match binomial({self.n + self.d},{self.d})={expected}"
            )
        object.__setattr__(self, "coeffs", c)

    @property
    def monomials(self) -> list[MultiIndex]:
        return enumerate_monomials(self.n, self.d)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "coeffs": [[float(z.real), float(z.imag)] for z in self.coeffs],
        }

    @staticmethod
    def from_json_dict(obj: dict) -> "HomogeneousPolynomial":
        coeffs = np.array([complex(re, im) for re, im in obj["coeffs"]])
        return HomogeneousPolynomial(int(obj["n"]), int(obj["d"]), coeffs)


@dataclass(frozen=True)
class AffinePolynomial:
    """Dense polynomial of total degree <= d in z_1..z_n (affine chart)."""

    n: int
    d: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        expected = len(enumerate_affine_monomials(self.n, self.d))
        if c.shape != (expected,):
            raise PolynomialError(f"coeff length {c.shape} does not match {expected}")
        object.__setattr__(self, "coeffs", c)

    @property
    def monomials(self) -> list[MultiIndex]:
        return enumerate_affine_monomials(self.n, self.d)

    def homogenize(self) -> HomogeneousPolynomial:
        """Z_0-homogenization to degree d; exact inverse of dehomogenize."""
        mons = enumerate_monomials(self.n, self.d)
        pos = {m.exponents: k for k, m in enumerate(mons)}
        out = np.zeros(len(mons), dtype=complex)
        for c, m in zip(self.coeffs, self.monomials):
            full = (self.d - m.degree,) + m.exponents
            out[pos[full]] = c
        return HomogeneousPolynomial(self.n, self.d, out)


def dehomogenize(P: HomogeneousPolynomial) -> AffinePolynomial:
    """Restriction to the chart Z_0 = 1; exact inverse of homogenize."""
    mons = enumerate_affine_monomials(P.n, P.d)
    pos = {m.exponents: k for k, m in enumerate(mons)}
    out = np.zeros(len(mons), dtype=complex)
    for c, m in zip(P.coeffs, P.monomials):
        out[pos[m.exponents[1:]]] = c
    return AffinePolynomial(P.n, P.d, out)


def eval_poly(P: HomogeneousPolynomial, Z: Sequence[complex]) -> complex:
    """Value P(Z) with compensated term summation (<= 1e-12 relative noise
    for |coeffs| <= 1 and ||Z|| <= 1)."""
    Z = np.asarray(Z, dtype=complex)
    if Z.shape != (P.n + 1,):
        raise PolynomialError(f"point length {Z.shape} does not match n+1={P.n + 1}")
    terms = []
    for c, m in zip(P.coeffs, P.monomials):
        if c == 0:
            continue
        t = c
        for zk, ek in zip(Z, m.exponents):
            if ek:
                t = t * zk**ek
        terms.append(t)
    return complex(kahan_sum(terms))


def eval_affine(p: AffinePolynomial, z: Sequence[complex]) -> complex:
    z = np.asarray(z, dtype=complex)
    if z.shape != (p.n,):
        raise PolynomialError(f"point length {z.shape} does not match n={p.n}")
    terms = []
    for c, m in zip(p.coeffs, p.monomials):
        if c == 0:
            continue
        t = c
        for zk, ek in zip(z, m.exponents):
            if ek:
                t = t * zk**ek
        terms.append(t)
    return complex(kahan_sum(terms))


def basis_matrix(points: np.ndarray, n: int, d: int) -> np.ndarray:
    """Vandermonde-style matrix of all degree-d monomials at the given
    homogeneous points (rows).  Vectorized fast path used by the solvers;
    `eval_poly` stays the compensated reference implementation."""
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    mons = enumerate_monomials(n, d)
    cols = [np.prod(pts ** np.array(m.exponents), axis=1) for m in mons]
    return np.stack(cols, axis=1)


def affine_basis_matrix(points: np.ndarray, n: int, d: int) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    mons = enumerate_affine_monomials(n, d)
    cols = [np.prod(pts ** np.array(m.exponents), axis=1) for m in mons]
    return np.stack(cols, axis=1)


def fs_section_norm(P: HomogeneousPolynomial, x) -> float:
    """Fubini-Study norm |P(Z)|/||Z||^d of the section at x = [Z].

    Independent of the chosen representative Z != 0.
    """
    Z = np.asarray(getattr(x, "rep", x), dtype=complex)
    nz = np.linalg.norm(Z)
    if nz == 0:
        raise PolynomialError("zero representative")
    return abs(eval_poly(P, Z / nz))


def affine_section_norm(p: AffinePolynomial, z: Sequence[complex], d: int) -> float:
    """|p(z)| / (1 + ||z||^2)^(d/2); equals the Fubini-Study norm of the
    Z_0^d-homogenization at [1 : z]."""
    if p.d > d:
        raise PolynomialError(f"cap degree {d} below polynomial degree {p.d}")
    z = np.asarray(z, dtype=complex)
    return abs(eval_affine(p, z)) / (1.0 + float(np.linalg.norm(z)) ** 2) ** (d / 2.0)


def coeff_l1_norm(P: HomogeneousPolynomial) -> float:
    return float(np.abs(P.coeffs).sum())


def polydisk_sup_lower(P: HomogeneousPolynomial, samples_per_angle: int, budget_cap: int = 10**7) -> float:
    """Certified lower bound of sup |P| over the closed unit polydisk.

    Samples the distinguished boundary torus at samples_per_angle equispaced
    phases per coordinate; the maximum principle puts the true sup there, so
    any sample maximum is a valid lower bound.  One phase is pinned to 0 by
    homogeneity, which shrinks the grid by a full factor of samples_per_angle
    without changing the sampled set of |P| values.
    """
    S = int(samples_per_angle)
    if S < 4 * P.d + 1:
        raise PolynomialError(f"samples_per_angle {S} below 4d+1 = {4 * P.d + 1}")
    if S**P.n > budget_cap:
        raise PolynomialError(f"sample budget {S ** P.n} exceeds cap {budget_cap}")
    phases = np.exp(2j * np.pi * np.arange(S) / S)
    grids = np.meshgrid(*([phases] * P.n), indexing="ij") if P.n else []
    pts = np.stack([np.ones(S**P.n if P.n else 1, dtype=complex)] + [g.ravel() for g in grids], axis=1)
    vals = basis_matrix(pts, P.n, P.d) @ P.coeffs
    return float(np.abs(vals).max())


def extract_degree_component(value_oracle: Callable, Z: Sequence[complex], m: int, N: int) -> complex:
    """Degree-m homogeneous component value at Z via the N-point discrete
    circle average (1/N) sum_j P(w^j Z) w^{-jm}, w = e^{2 pi i/N}.

    Exact whenever N exceeds the total degree of the sampled polynomial;
    smaller N aliases components m' = m (mod N) together.
    """
    if N < 1:
        raise PolynomialError("need N >= 1")
    Z = np.asarray(Z, dtype=complex)
    w = np.exp(2j * np.pi / N)
    terms = [value_oracle(w**j * Z) * w ** (-j * m) for j in range(N)]
    return complex(kahan_sum(terms)) / N


def veronese_power(P: HomogeneousPolynomial, k: int) -> HomogeneousPolynomial:
    """P^k by exact exponent-wise coefficient convolution."""
    if k < 1:
        raise PolynomialError("need k >= 1")
    if P.d * k > DEGREE_CAP:
        raise PolynomialError(f"degree {P.d * k} exceeds cap {DEGREE_CAP}")
    if comb(P.n + P.d * k, P.d * k) > COEFF_COUNT_CAP:
        raise PolynomialError("coefficient count exceeds cap")
    acc = {m.exponents: c for m, c in zip(P.monomials, P.coeffs) if c != 0}
    base = dict(acc)
    for _ in range(k - 1):
        nxt: dict = {}
        for ea, ca in acc.items():
            for eb, cb in base.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                nxt[e] = nxt.get(e, 0.0 + 0.0j) + ca * cb
        acc = nxt
    mons = enumerate_monomials(P.n, P.d * k)
    out = np.zeros(len(mons), dtype=complex)
    pos = {mm.exponents: i for i, mm in enumerate(mons)}
    for e, c in acc.items():
        out[pos[e]] = c
    return HomogeneousPolynomial(P.n, P.d * k, out)

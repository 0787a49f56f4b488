"""Degree-truncated extremal brackets, best constants, and radius functions.

For a sampled compactum K and a point x, the degree-d truncated extremal
value is (1/d) log of sup{ |P(Z_x)| : sup over unit lifts of K of |P| <= 1 }
over degree-d homogeneous P, with Z_x a unit representative of x.  The
modulus-program bracket turns into a lam bracket of width at most
(1/d) log(sec(pi/M_con) sec(pi/M_obj)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Optional, Sequence

import numpy as np

from .compacta import ProjectivePoint, SampledCompactum
from .optimizer import BracketedValue, ModulusProgram, solve_modulus_program
from .polycore import HomogeneousPolynomial, affine_basis_matrix, basis_matrix

BRACKETED = "bracketed"
INTERPOLATION = "interpolation_regime"


@dataclass(frozen=True)
class ExtremalResult:
    x: ProjectivePoint
    d: int
    lam_lo: float
    lam_hi: float
    witness: Optional[HomogeneousPolynomial]
    status: str = BRACKETED
    m_con: int = 64
    m_obj: int = 64
    diagnostics: dict = field(default_factory=dict)

    @property
    def lam_mid(self) -> float:
        return 0.5 * (self.lam_lo + self.lam_hi)

    @property
    def width(self) -> float:
        return self.lam_hi - self.lam_lo


def _constraint_rows(K: SampledCompactum, d: int) -> np.ndarray:
    # one modulus row per sample point: orbit rotations leave |P| unchanged
    return basis_matrix(K.reps(), K.n, d)


def truncated_extremal(K: SampledCompactum, x: ProjectivePoint, d: int,
                       m_con: int = 64, m_obj: int = 64) -> ExtremalResult:
    """Bracket for the degree-d truncated extremal value at x.

    The sup over K of the section norm equals the sup of |P| over the unit
    lift, so each sample contributes one modulus constraint; the objective is
    evaluation at a unit representative of x.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    if x.n != K.n:
        raise ValueError("dimension mismatch between x and K")
    V = _constraint_rows(K, d)
    u = basis_matrix(x.rep[None, :], K.n, d)[0]
    bracket = solve_modulus_program(ModulusProgram(u, V, m_con, m_obj))
    return _wrap(bracket, K, x, d, m_con, m_obj)


def _wrap(bracket: BracketedValue, K: SampledCompactum, x: ProjectivePoint, d: int,
          m_con: int, m_obj: int) -> ExtremalResult:
    if bracket.status == "interpolation_regime":
        return ExtremalResult(x, d, np.inf, np.inf, None, INTERPOLATION, m_con, m_obj,
                              dict(bracket.diagnostics))
    witness = None
    if bracket.witness is not None:
        witness = HomogeneousPolynomial(K.n, d, bracket.witness)
    lam_lo = float(np.log(bracket.lo) / d) if bracket.lo > 0 else -np.inf
    lam_hi = float(np.log(bracket.hi) / d) if bracket.hi > 0 else -np.inf
    return ExtremalResult(x, d, lam_lo, lam_hi, witness, BRACKETED, m_con, m_obj,
                          dict(bracket.diagnostics))


def best_constant(res: ExtremalResult) -> tuple[float, float]:
    """Bracket [exp(lam_lo), exp(lam_hi)] for the best constant at x."""
    if res.status != BRACKETED:
        raise ValueError("best constant undefined in the interpolation regime")
    return (float(np.exp(res.lam_lo)), float(np.exp(res.lam_hi)))


def radius(res: ExtremalResult) -> tuple[float, float]:
    """Reciprocal bracket for the fiber-disk radius (order swapped)."""
    c_lo, c_hi = best_constant(res)
    return (1.0 / c_hi, 1.0 / c_lo)


def extremal_profile(K: SampledCompactum, x: ProjectivePoint, degrees: Sequence[int],
                     m_con: int = 64, m_obj: int = 64) -> list[ExtremalResult]:
    """One bracket per degree, ascending; per-degree statuses are preserved."""
    degrees = list(degrees)
    if degrees != sorted(degrees):
        raise ValueError("degrees must be ascending")
    return [truncated_extremal(K, x, d, m_con, m_obj) for d in degrees]


def veronese_consistency(K: SampledCompactum, x: ProjectivePoint, d: int, k: int,
                         m_con: int = 64, m_obj: int = 64) -> dict:
    """Compare the ladder over multiples {k, 2k, ..., dk} with {1, ..., dk}.

    The top rung is the same program in both ladders, so its brackets must
    agree; across the ladders the aggregated lower evidence from multiples
    must stay below the full ladder's upper evidence and vice versa.
    """
    if d < 1 or k < 1:
        raise ValueError("need d, k >= 1")
    multiples = [k * j for j in range(1, d + 1)]
    full = list(range(1, d * k + 1))
    prof_m = extremal_profile(K, x, multiples, m_con, m_obj)
    prof_f = extremal_profile(K, x, full, m_con, m_obj)
    ok_m = [r for r in prof_m if r.status == BRACKETED]
    ok_f = [r for r in prof_f if r.status == BRACKETED]
    top_m, top_f = prof_m[-1], prof_f[-1]
    cert_slack = max([r.width for r in ok_m + ok_f], default=0.0) + 1e-9
    checks = {
        "top_rung_identical_program": (
            top_m.status == top_f.status
            and (top_m.status != BRACKETED
                 or abs(top_m.lam_lo - top_f.lam_lo) + abs(top_m.lam_hi - top_f.lam_hi) <= 1e-8)
        ),
        "multiples_hi_covers_full_lo": (
            not ok_m or not ok_f
            or max(r.lam_hi for r in ok_m) + cert_slack >= max(r.lam_lo for r in ok_f)
        ),
        "full_hi_covers_multiples_lo": (
            not ok_m or not ok_f
            or max(r.lam_hi for r in ok_f) + 1e-9 >= max(r.lam_lo for r in ok_m)
        ),
    }
    return {
        "k": k,
        "degrees_multiples": multiples,
        "degrees_full": full,
        "profile_multiples": prof_m,
        "profile_full": prof_f,
        "checks": checks,
        "pass": all(checks.values()),
    }


def affine_extremal(K: SampledCompactum, z, d: int,
                    m_con: int = 64, m_obj: int = 64) -> ExtremalResult:
    """Same bracket computed in the affine basis with (1+||.||^2)^(d/2) weights.

    All of K must lie in the chart Z_0 != 0.  The program is the homogeneous
    one written in a different basis, so brackets agree to basis-change noise.
    """
    reps = K.reps()
    if np.abs(reps[:, 0]).min() <= 1e-12:
        raise ValueError("compactum leaves the chart Z_0 != 0")
    zaff = reps[:, 1:] / reps[:, :1]
    weights = (1.0 + np.linalg.norm(zaff, axis=1) ** 2) ** (-d / 2.0)
    V = affine_basis_matrix(zaff, K.n, d) * weights[:, None]
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    wz = (1.0 + float(np.linalg.norm(z)) ** 2) ** (-d / 2.0)
    u = affine_basis_matrix(z[None, :], K.n, d)[0] * wz
    bracket = solve_modulus_program(ModulusProgram(u, V, m_con, m_obj))
    x = ProjectivePoint.from_affine(z)
    if bracket.status == "interpolation_regime":
        return ExtremalResult(x, d, np.inf, np.inf, None, INTERPOLATION, m_con, m_obj,
                              dict(bracket.diagnostics))
    # witness is an affine coefficient vector; store its homogenization
    from .polycore import AffinePolynomial

    witness = AffinePolynomial(K.n, d, bracket.witness).homogenize()
    lam_lo = float(np.log(bracket.lo) / d) if bracket.lo > 0 else -np.inf
    lam_hi = float(np.log(bracket.hi) / d) if bracket.hi > 0 else -np.inf
    return ExtremalResult(x, d, lam_lo, lam_hi, witness, BRACKETED, m_con, m_obj,
                          dict(bracket.diagnostics))


def coefficient_count(n: int, d: int) -> int:
    return comb(n + d, d)

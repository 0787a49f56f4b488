"""Graded point-evaluation homomorphism norms and spectrum/hull consistency.

Only point evaluations m_z(P) = P(z) are represented: for the restriction
algebra of a sampled compactum they exhaust the spectrum, so the per-degree
norm ladder ||m||_d and the sup_d ||m||_d^{1/d} evidence are exactly the
extremal machinery in an unnormalized basis.  The ladder is reported as
evidence; no limit over all degrees is ever claimed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .compacta import ProjectivePoint, SampledCompactum
from .extremal import BRACKETED, best_constant, truncated_extremal
from .optimizer import ModulusProgram, solve_modulus_program
from .polycore import HomogeneousPolynomial, basis_matrix, fs_section_norm


@dataclass(frozen=True)
class GradedAlgebraOnK:
    """Sections restricted to K with per-degree sup norms over the unit lift."""

    K: SampledCompactum

    def degree_norm(self, P: HomogeneousPolynomial) -> float:
        vals = basis_matrix(self.K.reps(), self.K.n, P.d) @ P.coeffs
        return float(np.abs(vals).max())


@dataclass(frozen=True)
class GradedHom:
    """Point-evaluation homomorphism record with its computed norm ladder."""

    z: np.ndarray = field(repr=False)
    ladder: tuple  # entries {"d", "lo", "hi", "status"}
    triple_norm_evidence: float
    flags: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "z": [[float(c.real), float(c.imag)] for c in self.z],
            "ladder": [dict(r) for r in self.ladder],
            "triple_norm_evidence": self.triple_norm_evidence,
            "flags": dict(self.flags),
        }


def hom_norm(alg: GradedAlgebraOnK, z, d: int, m_con: int = 64, m_obj: int = 64) -> dict:
    """Bracket for ||m_z||_d = sup{|P(z)| : sup over the unit lift |P| <= 1}.

    Identical modulus program to the extremal one except the objective is the
    raw evaluation at z (no unit normalization), so
    ||m_z||_d^{1/d} = exp(lam) * ||z|| carries over bracket-for-bracket.
    """
    z = np.asarray(z, dtype=complex).ravel()
    if np.linalg.norm(z) == 0:
        raise ValueError("need z != 0")
    K = alg.K
    V = basis_matrix(K.reps(), K.n, d)
    u = basis_matrix(z[None, :], K.n, d)[0]
    br = solve_modulus_program(ModulusProgram(u, V, m_con, m_obj))
    if br.status == "interpolation_regime":
        return {"d": d, "lo": np.inf, "hi": np.inf, "status": br.status}
    return {"d": d, "lo": br.lo, "hi": br.hi, "status": "bracketed"}


def triple_norm(alg: GradedAlgebraOnK, z, degrees: Sequence[int],
                m_con: int = 64, m_obj: int = 64) -> GradedHom:
    """Ladder evidence for |||m_z|||: max over the ladder of ||m||_d^{1/d}.

    The root-scale lower evidence comes from bracket lows; a growth flag is
    raised when the top two rungs still increase.  For unit z the evidence is
    compared against the best-constant bracket at [z] (they identify the
    spectrum point with the hull point).
    """
    degrees = list(degrees)
    if not degrees:
        raise ValueError("empty degree ladder")
    z = np.asarray(z, dtype=complex).ravel()
    rungs = [hom_norm(alg, z, d, m_con, m_obj) for d in degrees]
    roots = [r["lo"] ** (1.0 / r["d"]) for r in rungs if np.isfinite(r["lo"]) and r["lo"] > 0]
    evidence = max(roots) if roots else 0.0
    flags = {}
    if len(roots) >= 2 and roots[-1] > roots[-2] * (1 + 1e-9):
        flags["growing"] = True
    nz = float(np.linalg.norm(z))
    if abs(nz - 1.0) <= 1e-9:
        res = truncated_extremal(alg.K, ProjectivePoint(z), max(degrees), m_con, m_obj)
        if res.status == BRACKETED:
            c_lo, c_hi = best_constant(res)
            width = c_hi - c_lo
            top = rungs[-1]
            top_root_lo = top["lo"] ** (1.0 / top["d"])
            top_root_hi = top["hi"] ** (1.0 / top["d"])
            flags["best_constant_bracket"] = (c_lo, c_hi)
            flags["agrees_with_best_constant"] = bool(
                top_root_hi + width + 2e-2 >= c_lo and c_hi + width + 2e-2 >= top_root_lo
            )
    return GradedHom(z=z, ladder=tuple(rungs), triple_norm_evidence=float(evidence), flags=flags)


def stability_probe(alg: GradedAlgebraOnK, hull_samples: Sequence[ProjectivePoint],
                    d_max: int, m_con: int = 64, m_obj: int = 64) -> dict:
    """Evidence that the best-constant function stays bounded on the samples.

    Reports the sup of best-constant bracket highs over the samples; the
    probe passes when every stream is finite with no growth trend on the top
    rungs.  This never claims stability, only that the computed ladders show
    no divergence.
    """
    ladder = []
    d = 1
    while d < d_max:
        ladder.append(d)
        d *= 2
    ladder.append(d_max)
    ladder = sorted(set(ladder))
    per_sample = []
    sup_c = 0.0
    passed = True
    for x in hull_samples:
        stream = [truncated_extremal(alg.K, x, d, m_con, m_obj) for d in ladder]
        ok = [r for r in stream if r.status == BRACKETED]
        if not ok:
            passed = False
            per_sample.append({"x": x, "c_hi": np.inf, "trend": "no_bracket"})
            continue
        c_his = [np.exp(r.lam_hi) for r in ok]
        c_hi = float(max(c_his))
        sup_c = max(sup_c, c_hi)
        growing = len(c_his) >= 2 and c_his[-1] > c_his[-2] * 1.05
        interior = int(np.argmax(c_his)) < len(c_his) - 1
        trend = "growing" if growing else ("interior_max" if interior else "flat_top")
        if growing:
            passed = False
        per_sample.append({"x": x, "c_hi": c_hi, "trend": trend})
    return {"sup_c_evidence": sup_c, "per_sample": per_sample, "ladder": ladder,
            "pass": passed and np.isfinite(sup_c)}


def gelfand_norm_check(alg: GradedAlgebraOnK, sections: Sequence[HomogeneousPolynomial],
                       hull_samples_with_c: Sequence[tuple],
                       slack: float = 1e-9) -> dict:
    """Transform contraction sweep: the section norm at each hull sample must
    stay below C_hi^d times the sup norm over K.

    hull_samples_with_c: pairs (ProjectivePoint, c_hi).  Violations are
    listed, not raised; they indicate a bad hull classification upstream.
    """
    violations = []
    checked = 0
    for P in sections:
        norm_k = alg.degree_norm(P)
        for x, c_hi in hull_samples_with_c:
            lhs = fs_section_norm(P, x)
            rhs = c_hi**P.d * norm_k + slack
            checked += 1
            if lhs > rhs:
                violations.append({"d": P.d, "x": x, "lhs": lhs, "rhs": rhs})
    return {"checked": checked, "violations": violations, "pass": not violations}

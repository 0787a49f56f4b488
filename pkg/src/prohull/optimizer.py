"""Self-contained dense LP engine and the phase-discretized modulus programs.

A modulus program maximizes |<c, u>| over complex coefficient vectors c
subject to per-sample constraints |<c, v_j>| <= 1.  Each disk constraint is
replaced by the circumscribed M_con-gon (half-planes), so the LP relaxation
can only over-estimate; the optimal witness rescaled into the true disks
gives a certified lower bound.  The bracket ratio is therefore at most
sec(pi/M_con) * sec(pi/M_obj) by construction.

The LP itself is solved through its dual (min b.y, A^T y = c, y >= 0) with a
two-phase revised simplex: the basis has size len(c), so row counts in the
tens of thousands stay cheap.  Constraint rows are generated lazily and the
returned value equals the full-polygon optimum (the loop exits only when no
polygon facet is violated).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Optional

import numpy as np
from scipy.linalg import lu_factor, lu_solve


class LPError(RuntimeError):
    pass


# ---------------------------------------------------------------- LP engine


class _EtaLU:
    """Basis solves through an LU factorization plus an eta file."""

    def __init__(self, B):
        self.lu = lu_factor(B)
        self.etas = []

    def ftran(self, a):
        x = lu_solve(self.lu, a)
        for pos, delta in self.etas:
            x = x + delta * x[pos]
        return x

    def btran(self, cb):
        y = np.asarray(cb, float).copy()
        for pos, delta in reversed(self.etas):
            y[pos] = y[pos] + y @ delta
        return lu_solve(self.lu, y, trans=1)


def _eta(pos, d):
    piv = d[pos]
    delta = -d / piv
    delta[pos] = 1.0 / piv - 1.0
    return pos, delta


def _simplex(cols, cost, basis, c_rhs, allow, max_iter, bland):
    """min cost.y s.t. cols[:, :] y = c_rhs (y over all columns, basic only),
    y >= 0.  Returns (status, basis)."""
    basis = list(basis)
    try:
        fac = _EtaLU(cols[:, basis])
    except Exception:
        return "singular", basis
    stall = 0
    last = np.inf
    since = 0
    not_basis = np.ones(cols.shape[1], bool)
    not_basis[basis] = False
    banned = np.zeros(cols.shape[1], bool)
    for _ in range(max_iter):
        if since >= 40:
            try:
                fac = _EtaLU(cols[:, basis])
            except Exception:
                return "singular", basis
            since = 0
        xb = fac.ftran(c_rhs)
        ydual = fac.btran(cost[basis])
        red = cost - ydual @ cols
        cand = np.where((red < -1e-9) & allow & not_basis & ~banned)[0]
        if cand.size == 0:
            return "optimal", basis
        j = int(cand.min()) if bland else int(cand[np.argmin(red[cand])])
        d = fac.ftran(cols[:, j])
        pos = np.where(d > 1e-9)[0]
        if pos.size == 0:
            # re-check against a fresh factorization before concluding
            try:
                fac = _EtaLU(cols[:, basis])
            except Exception:
                return "singular", basis
            since = 0
            d = fac.ftran(cols[:, j])
            pos = np.where(d > 1e-9)[0]
            if pos.size == 0:
                if np.abs(d).max(initial=0.0) <= 1e-7:
                    # numerically null direction: the reduced-cost signal is
                    # noise, never a ray; skip this column for the solve
                    banned[j] = True
                    continue
                return "unbounded", basis
        ratios = np.maximum(xb[pos], 0.0) / d[pos]
        rmin = ratios.min()
        ties = pos[ratios <= rmin + 1e-9]
        if bland:
            i = int(ties[np.argmin(np.asarray(basis)[ties])])
        else:
            i = int(ties[np.argmax(d[ties])])
        fac.etas.append(_eta(i, d))
        not_basis[basis[i]] = True
        not_basis[j] = False
        basis[i] = j
        since += 1
        obj = float(cost[basis] @ fac.ftran(c_rhs))
        if obj > last - 1e-12 * (1 + abs(last)):
            stall += 1
            if stall > 60:
                bland = True
        else:
            stall = 0
        last = obj
    return "iteration_limit", basis


def _solve_dual(A, b, c, max_iter, bland0):
    m, n = A.shape
    cols = np.hstack([A.T, np.diag(np.where(c >= 0, 1.0, -1.0))])
    nv = m + n
    cost1 = np.zeros(nv)
    cost1[m:] = 1.0
    st, basis = _simplex(cols, cost1, list(range(m, nv)), c, np.ones(nv, bool), max_iter, bland0)
    if st != "optimal":
        return {"status": "singular" if st == "singular" else "numerical_failure",
                "detail": f"phase1 {st}"}
    fac = _EtaLU(cols[:, basis])
    if float(cost1[basis] @ fac.ftran(c)) > 1e-8 * (1.0 + float(np.abs(c).sum())):
        return {"status": "unbounded", "value": np.inf}
    cost2 = np.zeros(nv)
    cost2[:m] = b
    allow = np.zeros(nv, bool)
    allow[:m] = True
    st, basis = _simplex(cols, cost2, basis, c, allow, max_iter, bland0)
    if st != "optimal":
        return {"status": "singular" if st == "singular" else "numerical_failure",
                "detail": f"phase2 {st}"}
    fac = _EtaLU(cols[:, basis])
    y_b = fac.ftran(c)
    val = float(cost2[basis] @ y_b)
    act = sorted(j for j in basis if j < m)
    if act:
        x, *_ = np.linalg.lstsq(A[act], b[act], rcond=None)
    else:
        x = np.zeros(n)
    y = np.zeros(m)
    for k, j in enumerate(basis):
        if j < m:
            y[j] = max(float(y_b[k]), 0.0)
    return {"status": "optimal", "value": val, "x": x, "y": y}


def solve_lp(A, b, c, max_iter: int = 50000) -> dict:
    """max c.x s.t. Ax <= b with x free; the origin is assumed feasible
    (all our constructions have b >= 0).

    Returns {"status": one of optimal/unbounded/numerical_failure, ...} with
    "value", primal "x", dual "y", and verification residuals on success.
    Feasibility is verified relative to the solution scale, so honest answers
    survive badly conditioned inputs instead of being rejected.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    c = np.asarray(c, dtype=float).ravel()
    m, n = A.shape
    rn = np.linalg.norm(A, axis=1)
    rn[rn == 0] = 1.0
    As = A / rn[:, None]
    bs = b / rn
    # last-resort attempts break massive dual degeneracy (hundreds of ties)
    # with a deterministic objective perturbation; the induced value slack is
    # reported so callers can keep their upper bounds rigorous
    rng = np.random.Generator(np.random.Philox(key=[m, n]))
    delta = 1e-11 * (1.0 + np.abs(c)) * rng.uniform(0.5, 1.5, size=n) \
        * np.where(rng.random(n) < 0.5, -1.0, 1.0)
    out = {"status": "numerical_failure", "detail": "not attempted"}
    for bland0, perturb in ((False, False), (True, False), (False, True), (True, True)):
        budget = max_iter if perturb else min(max_iter, 6000)
        out = _solve_dual(As, bs, c + delta if perturb else c, budget, bland0)
        if out["status"] not in ("singular", "numerical_failure"):
            break
    if out["status"] == "singular":
        return {"status": "numerical_failure", "detail": "singular basis"}
    if out["status"] != "optimal":
        return out
    x = out["x"]
    if perturb:
        out["value"] = float(c @ x)
        out["pert_bound"] = float(np.abs(delta) @ np.abs(x)) + 1e-12
    feas = float((A @ x - b).max(initial=-np.inf))
    gap = abs(float(c @ x) - out["value"])
    out["feas_residual"] = feas
    out["dual_gap"] = gap
    scale = 1.0 + float(np.abs(x).sum())
    if feas > 1e-9 * (np.abs(b).max(initial=0.0) + scale) or gap > 1e-6 * (1 + abs(out["value"])):
        return {"status": "numerical_failure",
                "detail": f"verification failed: feas={feas:.3e} gap={gap:.3e}",
                "feas_residual": feas, "dual_gap": gap}
    return out


# ------------------------------------------------------- modulus programs


@dataclass(frozen=True)
class ModulusProgram:
    """max |<c, objective>| s.t. |<c, constraints[j]>| <= 1 for all j."""

    objective: np.ndarray = field(repr=False)
    constraints: np.ndarray = field(repr=False)
    m_con: int = 64
    m_obj: int = 64

    def __post_init__(self):
        obj = np.asarray(self.objective, dtype=complex).ravel()
        con = np.atleast_2d(np.asarray(self.constraints, dtype=complex))
        if con.shape[0] < 1:
            raise LPError("need at least one constraint")
        if con.shape[1] != obj.shape[0]:
            raise LPError("objective/constraint dimension mismatch")
        for name, m in (("m_con", self.m_con), ("m_obj", self.m_obj)):
            if m < 8 or m % 2:
                raise LPError(f"{name} must be even and >= 8, got {m}")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", con)


@dataclass(frozen=True)
class BracketedValue:
    """Certified bracket with a witness attaining at least lo.

    The witness satisfies the true modulus constraints (max_j |<w,v_j>| <= 1
    up to evaluation noise) and hi/lo <= sec(pi/m_con) sec(pi/m_obj).
    """

    lo: float
    hi: float
    witness: Optional[np.ndarray]
    status: str = "optimal"
    diagnostics: dict = field(default_factory=dict)


def _canon_phase(v: np.ndarray) -> np.ndarray:
    """Rotate so the first max-modulus entry is real positive.

    Linear forms enter only through moduli, so any phase normalization is
    legal; this one makes the probe grid covariant under scaling of the
    objective (exact C*-equivariance) and aligns an on-sample objective with
    its own constraint polygon (exact on-set bound).
    """
    a = np.abs(v)
    mx = a.max()
    if mx == 0:
        return v.copy()
    i = int(np.argmax(a >= mx * (1 - 1e-12)))
    return v * np.conj(v[i] / a[i])


def _probe_multiples(m_con: int, m_obj: int) -> list:
    """Distinct objective probes modulo the polygon rotation group.

    The realified feasible set is invariant under c -> e^{2 pi i/m_con} c, so
    probes congruent mod 2 pi/m_con give identical LP values; only
    m_obj / gcd(m_obj, m_con) of them are distinct.
    """
    k = m_obj // gcd(m_obj, m_con)
    return [2 * np.pi * t / m_obj for t in range(k)]


def _real_row(vrow: np.ndarray, phase: float) -> np.ndarray:
    w = np.exp(1j * phase) * vrow
    return np.concatenate([w.real, -w.imag])


def solve_modulus_program(prog: ModulusProgram, max_rounds: int = 100) -> BracketedValue:
    """Certified bracket for the modulus program via the polygon LP.

    lo comes from the optimal witness rescaled into the true disk constraints,
    hi from the relaxation value times sec(pi/m_obj).  Unboundedness (the
    interpolation regime: the sample rows cannot pin the objective direction)
    is reported as hi = lo = +inf with status "interpolation_regime".
    """
    V = prog.constraints
    u = prog.objective
    N, B = V.shape
    M = prog.m_con
    Vc = np.stack([_canon_phase(v) for v in V])
    uc = _canon_phase(u)
    phases = 2 * np.pi * np.arange(M) / M
    rot = np.exp(1j * phases)

    best_val = -np.inf
    best_c = None
    lp_diag = {}
    for theta in _probe_multiples(prog.m_con, prog.m_obj):
        cobj = _real_row(uc, theta)
        active = {(j, k) for j in range(N) for k in (0, M // 4, M // 2, 3 * M // 4)}
        cvec = None
        val = None
        for _ in range(max_rounds):
            keys = sorted(active)
            A = np.stack([_real_row(Vc[j], phases[k]) for (j, k) in keys])
            res = solve_lp(A, np.ones(len(keys)), cobj)
            if res["status"] == "unbounded":
                return BracketedValue(np.inf, np.inf, None, "interpolation_regime",
                                      {"reason": "value unbounded: sample rank below coefficient count"})
            if res["status"] != "optimal":
                raise LPError(f"modulus program failed: {res.get('detail')}")
            val = res["value"] + res.get("pert_bound", 0.0)
            x = res["x"]
            cvec = x[:B] + 1j * x[B:]
            w = Vc @ cvec
            gauge = np.real(w[:, None] * rot[None, :])
            worst = gauge.argmax(axis=1)
            viol = [(j, int(worst[j])) for j in np.where(gauge.max(axis=1) > 1 + 1e-9)[0]]
            viol = [t for t in viol if t not in active]
            if not viol:
                break
            active |= set(viol)
        else:
            raise LPError("row generation did not converge")
        lp_diag = {"rows": len(active), "feas_residual": res.get("feas_residual"),
                   "dual_gap": res.get("dual_gap")}
        if val > best_val:
            best_val = val
            best_c = cvec

    w = Vc @ best_c
    scale = float(np.abs(w).max())
    if best_val <= 0 or scale <= 0:
        return BracketedValue(0.0, 0.0, best_c * 0.0, "optimal", lp_diag)
    witness = best_c / scale
    # both are certified lower bounds; the witness value is typically tighter
    lo = max(float(abs(witness @ uc)), best_val * np.cos(np.pi / prog.m_con))
    hi = best_val / np.cos(np.pi / prog.m_obj)
    return BracketedValue(lo, hi, witness, "optimal", lp_diag)

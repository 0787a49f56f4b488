import numpy as np
import pytest

from prohull.compacta import (
    CurveGenerator,
    ProjectivePoint,
    apply_unitary,
    circle_compactum,
    sample,
)
from prohull.extremal import (
    BRACKETED,
    INTERPOLATION,
    affine_extremal,
    best_constant,
    extremal_profile,
    radius,
    truncated_extremal,
    veronese_consistency,
)
from prohull.polycore import basis_matrix, fs_section_norm
from prohull.utils import make_rng, random_unitary

LOG_SEC_64 = float(np.log(1.0 / np.cos(np.pi / 64)))


def circle_lam(z):
    """Closed-form extremal value for the unit circle in the chart."""
    return float(np.log(max(1.0, abs(z))) - 0.5 * np.log((1 + abs(z) ** 2) / 2))


def brute_force_lam(K, zval, d, M=256):
    """Independent oracle route: scipy LP over the fine polygon with an
    objective direction sweep (no shared code with the production solver)."""
    from scipy.optimize import linprog

    V = basis_matrix(K.reps(), 1, d)
    u = basis_matrix(ProjectivePoint.from_affine([zval]).rep[None, :], 1, d)[0]
    B = d + 1
    ph = np.exp(2j * np.pi * np.arange(M) / M)
    rows = np.concatenate([
        np.concatenate([(ph[:, None] * v[None, :]).real,
                        -(ph[:, None] * v[None, :]).imag], axis=1) for v in V])
    b = np.ones(len(rows))
    best = 0.0
    for t in range(0, M, M // 8):
        w = ph[t] * u
        cobj = np.concatenate([w.real, -w.imag])
        res = linprog(-cobj, A_ub=rows, b_ub=b, bounds=[(None, None)] * (2 * B), method="highs")
        if res.status == 0:
            best = max(best, -res.fun)
    return float(np.log(best) / d)


class TestCircleOracle:
    def test_brute_force_verifies_closed_form(self, circle64):
        # the closed form itself is validated by an independent LP first
        for zval, d in ((0.0, 1), (0.0, 2), (2.0, 1), (2.0, 2), (0.5, 2)):
            bf = brute_force_lam(circle64, zval, d)
            assert bf == pytest.approx(circle_lam(zval), abs=3e-3)

    @pytest.mark.parametrize("d", [1, 2, 4, 8, 12])
    def test_center(self, circle256, d):
        res = truncated_extremal(circle256, ProjectivePoint.from_affine([0.0]), d)
        assert res.lam_lo - 5e-3 <= 0.346574 <= res.lam_hi + 5e-3
        assert res.width <= np.log((1 / np.cos(np.pi / 64)) ** 2) / d + 1e-9

    @pytest.mark.parametrize("d", [4, 8])
    def test_z2(self, circle256, d):
        res = truncated_extremal(circle256, ProjectivePoint.from_affine([2.0]), d)
        assert res.lam_lo - 5e-3 <= 0.235002 <= res.lam_hi + 5e-3

    def test_single_point_k(self):
        K = sample(CurveGenerator("explicit_cloud",
                                  {"points": [[1, k] for k in range(8)]}), 8)
        one = sample(CurveGenerator("explicit_cloud", {"points": [[1, 0.5]] * 1 +
                                                       [[1, v] for v in range(1, 8)]}), 8)
        x = one.points[0]
        res = truncated_extremal(one, x, 3)
        # x is a constraint point: bracket straddles 0 within certification
        assert res.lam_lo <= 1e-12
        assert res.lam_hi <= LOG_SEC_64 / 3 + 1e-9


class TestDerived:
    def test_best_constant_center(self, circle256):
        res = truncated_extremal(circle256, ProjectivePoint.from_affine([0.0]), 8)
        lo, hi = best_constant(res)
        assert lo - 1e-2 <= np.sqrt(2) <= hi + 1e-2

    def test_radius_center(self, circle256):
        res = truncated_extremal(circle256, ProjectivePoint.from_affine([0.0]), 8)
        lo, hi = radius(res)
        assert lo - 1e-2 <= 1 / np.sqrt(2) <= hi + 1e-2

    def test_exp_log_round_trip(self, circle64):
        res = truncated_extremal(circle64, ProjectivePoint.from_affine([1.3]), 4)
        c_lo, c_hi = best_constant(res)
        r_lo, r_hi = radius(res)
        assert r_lo == pytest.approx(1 / c_hi)
        assert r_hi == pytest.approx(1 / c_lo)


class TestProfile:
    def test_degree_stream_constant(self, circle256):
        prof = extremal_profile(circle256, ProjectivePoint.from_affine([0.0]), [1, 2, 4, 8])
        for res in prof:
            assert res.lam_lo - 5e-3 <= 0.346574 <= res.lam_hi + 5e-3

    def test_on_set_stream(self, circle64):
        x = circle64.points[11]
        prof = extremal_profile(circle64, x, [1, 2, 4])
        for res in prof:
            assert res.lam_hi <= LOG_SEC_64 / res.d + 1e-9

    def test_degree_doubling(self, circle64):
        x = ProjectivePoint.from_affine([1.9])
        prof = extremal_profile(circle64, x, [2, 4])
        assert prof[1].lam_hi >= prof[0].lam_lo - 1e-9

    def test_ascending_required(self, circle64):
        with pytest.raises(ValueError):
            extremal_profile(circle64, circle64.points[0], [4, 2])

    def test_interpolation_regime(self):
        K = sample(CurveGenerator("explicit_cloud",
                                  {"points": [[1, k] for k in range(8)]}), 8)
        res = truncated_extremal(K, ProjectivePoint.from_affine([10.0]), 9)
        assert res.status == INTERPOLATION
        assert res.lam_hi == np.inf


class TestInvariants:
    def test_monotone_in_k(self, circle64):
        K128 = circle_compactum(128)
        for zval in (0.0, 1.4, 2.5 + 0.5j):
            x = ProjectivePoint.from_affine([zval])
            small = truncated_extremal(circle64, x, 5)
            big = truncated_extremal(K128, x, 5)
            assert big.lam_lo <= small.lam_hi + 1e-9

    def test_unitary_invariance(self, circle64):
        rng = make_rng(30, "ext-unitary")
        x = ProjectivePoint.from_affine([0.7 + 0.7j])
        base = truncated_extremal(circle64, x, 5)
        for _ in range(3):
            U = random_unitary(rng, 2)
            moved = truncated_extremal(apply_unitary(circle64, U), ProjectivePoint(U @ x.rep), 5)
            w = base.width + moved.width + 1e-8
            assert base.lam_lo <= moved.lam_hi + w
            assert moved.lam_lo <= base.lam_hi + w

    def test_witness_validity(self, circle64):
        res = truncated_extremal(circle64, ProjectivePoint.from_affine([2.0]), 6)
        vals = np.abs(basis_matrix(circle64.reps(), 1, 6) @ res.witness.coeffs)
        assert vals.max() <= 1 + 1e-9
        assert fs_section_norm(res.witness, res.x) >= np.exp(6 * res.lam_lo) - 1e-8


class TestVeronese:
    def test_k1_identical(self, circle64):
        rep = veronese_consistency(circle64, ProjectivePoint.from_affine([1.2]), 3, 1)
        assert rep["pass"]
        assert rep["degrees_multiples"] == rep["degrees_full"]

    def test_circle_k2(self, circle64):
        rep = veronese_consistency(circle64, ProjectivePoint.from_affine([1.2]), 4, 2)
        assert rep["pass"]

    def test_on_set_zero_brackets(self, circle64):
        rep = veronese_consistency(circle64, circle64.points[5], 2, 3)
        assert rep["pass"]
        for r in rep["profile_multiples"]:
            assert abs(r.lam_mid) <= LOG_SEC_64 / r.d + 1e-9


class TestAffine:
    def test_matches_homogeneous(self, circle256):
        x = ProjectivePoint.from_affine([0.0])
        hom = truncated_extremal(circle256, x, 6)
        aff = affine_extremal(circle256, [0.0], 6)
        assert aff.lam_lo == pytest.approx(hom.lam_lo, abs=1e-6)
        assert aff.lam_hi == pytest.approx(hom.lam_hi, abs=1e-6)

    def test_on_set_slack(self, circle64):
        z = circle64.points[9].rep[1] / circle64.points[9].rep[0]
        res = affine_extremal(circle64, [z], 4)
        assert res.lam_hi <= LOG_SEC_64 / 4 + 1e-9

    def test_z3_value(self, circle256):
        res = affine_extremal(circle256, [3.0], 6)
        assert res.lam_lo - 5e-3 <= 0.293893 <= res.lam_hi + 5e-3

    def test_chart_violation(self):
        pts = [[0, 1]] + [[1, k] for k in range(7)]
        K = sample(CurveGenerator("explicit_cloud", {"points": pts}), 8)
        with pytest.raises(ValueError):
            affine_extremal(K, [0.5], 2)

import numpy as np
import pytest

from prohull.polycore import (
    AffinePolynomial,
    HomogeneousPolynomial,
    PolynomialError,
    affine_section_norm,
    basis_matrix,
    coeff_l1_norm,
    dehomogenize,
    enumerate_affine_monomials,
    enumerate_monomials,
    eval_poly,
    extract_degree_component,
    fs_section_norm,
    polydisk_sup_lower,
    veronese_power,
)
from prohull.utils import make_rng


def hp(n, d, coeff_map):
    mons = enumerate_monomials(n, d)
    c = np.zeros(len(mons), dtype=complex)
    pos = {m.exponents: i for i, m in enumerate(mons)}
    for e, v in coeff_map.items():
        c[pos[e]] = v
    return HomogeneousPolynomial(n, d, c)


def random_hp(rng, n, d):
    k = len(enumerate_monomials(n, d))
    return HomogeneousPolynomial(n, d, rng.normal(size=k) + 1j * rng.normal(size=k))


class TestEnumeration:
    def test_n1_d2(self):
        mons = enumerate_monomials(1, 2)
        assert [m.exponents for m in mons] == [(2, 0), (1, 1), (0, 2)]

    def test_n2_d3_count(self):
        assert len(enumerate_monomials(2, 3)) == 10

    def test_single_variable(self):
        mons = enumerate_monomials(0, 5)
        assert [m.exponents for m in mons] == [(5,)]

    def test_degrees_agree(self):
        for m in enumerate_monomials(3, 4):
            assert m.degree == 4

    def test_affine_graded(self):
        mons = enumerate_affine_monomials(2, 2)
        assert [m.exponents for m in mons] == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]

    def test_deterministic(self):
        assert enumerate_monomials(2, 5) == enumerate_monomials(2, 5)


class TestEval:
    def test_square(self):
        P = hp(1, 2, {(2, 0): 1.0})
        assert eval_poly(P, [2.0, 0.0]) == pytest.approx(4.0)

    def test_cancellation(self):
        P = hp(1, 2, {(2, 0): 1.0, (0, 2): 1.0})
        assert abs(eval_poly(P, [1.0, 1j])) <= 1e-14

    def test_homogeneity_example(self):
        P = hp(1, 2, {(1, 1): 1.0})
        t = 0.37 - 1.2j
        assert eval_poly(P, [t, t]) == pytest.approx(t**2)

    def test_homogeneity_property(self):
        rng = make_rng(1, "homogeneity")
        for _ in range(25):
            n = int(rng.integers(1, 4))
            d = int(rng.integers(1, 7))
            P = random_hp(rng, n, d)
            Z = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
            t = rng.normal() + 1j * rng.normal()
            lhs = eval_poly(P, t * Z)
            rhs = t**d * eval_poly(P, Z)
            assert abs(lhs - rhs) <= 1e-10 * abs(t) ** d * coeff_l1_norm(P) * max(
                1.0, np.linalg.norm(Z) ** d)

    def test_dimension_mismatch(self):
        P = hp(1, 2, {(2, 0): 1.0})
        with pytest.raises(PolynomialError):
            eval_poly(P, [1.0, 0.0, 0.0])

    def test_matches_basis_matrix(self):
        rng = make_rng(2, "vandermonde")
        P = random_hp(rng, 2, 4)
        pts = rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3))
        fast = basis_matrix(pts, 2, 4) @ P.coeffs
        slow = [eval_poly(P, q) for q in pts]
        assert np.allclose(fast, slow, rtol=1e-11, atol=1e-11)


class TestSectionNorm:
    def test_coordinate_section(self):
        P = hp(2, 1, {(1, 0, 0): 1.0})
        assert fs_section_norm(P, [1.0, 0, 0]) == pytest.approx(1.0)

    def test_product_point(self):
        P = hp(1, 2, {(1, 1): 1.0})
        assert fs_section_norm(P, [1.0, 1.0]) == pytest.approx(0.5)

    def test_representative_independence(self):
        rng = make_rng(3, "rep-independence")
        for _ in range(20):
            P = random_hp(rng, 2, 3)
            Z = rng.normal(size=3) + 1j * rng.normal(size=3)
            c = (rng.normal() + 1j * rng.normal()) or 1.0
            a, b = fs_section_norm(P, Z), fs_section_norm(P, c * Z)
            assert abs(a - b) <= 1e-12 * max(1.0, a)

    def test_multiplicativity(self):
        rng = make_rng(4, "multiplicativity")
        for _ in range(20):
            P, Q = random_hp(rng, 1, 3), random_hp(rng, 1, 2)
            prod = _mul(P, Q)
            Z = rng.normal(size=2) + 1j * rng.normal(size=2)
            lhs = fs_section_norm(prod, Z)
            rhs = fs_section_norm(P, Z) * fs_section_norm(Q, Z)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, rhs)

    def test_zero_representative(self):
        P = hp(1, 1, {(1, 0): 1.0})
        with pytest.raises(PolynomialError):
            fs_section_norm(P, [0.0, 0.0])


def _mul(P, Q):
    from prohull.polycore import enumerate_monomials

    mons = enumerate_monomials(P.n, P.d + Q.d)
    pos = {m.exponents: i for i, m in enumerate(mons)}
    out = np.zeros(len(mons), dtype=complex)
    for ca, ma in zip(P.coeffs, P.monomials):
        for cb, mb in zip(Q.coeffs, Q.monomials):
            e = tuple(x + y for x, y in zip(ma.exponents, mb.exponents))
            out[pos[e]] += ca * cb
    return HomogeneousPolynomial(P.n, P.d + Q.d, out)


class TestAffine:
    def test_constant(self):
        p = AffinePolynomial(1, 0, np.array([1.0 + 0j]))
        assert affine_section_norm(p, [0.0], 0) == pytest.approx(1.0)

    def test_linear(self):
        mons = enumerate_affine_monomials(1, 1)
        c = np.zeros(len(mons), complex)
        c[1] = 1.0
        p = AffinePolynomial(1, 1, c)
        assert affine_section_norm(p, [1.0], 1) == pytest.approx(1 / np.sqrt(2))

    def test_square_over_weight(self):
        mons = enumerate_affine_monomials(1, 2)
        c = np.zeros(len(mons), complex)
        c[2] = 1.0
        p = AffinePolynomial(1, 2, c)
        assert affine_section_norm(p, [2.0], 2) == pytest.approx(4.0 / 5.0)

    def test_homogenize_round_trip(self):
        rng = make_rng(5, "homogenize")
        for n, d in ((1, 3), (2, 4)):
            k = len(enumerate_affine_monomials(n, d))
            p = AffinePolynomial(n, d, rng.normal(size=k) + 1j * rng.normal(size=k))
            back = dehomogenize(p.homogenize())
            assert np.array_equal(back.coeffs, p.coeffs)

    def test_matches_homogenized_norm(self):
        rng = make_rng(6, "affine-norm")
        for _ in range(10):
            n, d = 2, 3
            k = len(enumerate_affine_monomials(n, d))
            p = AffinePolynomial(n, d, rng.normal(size=k) + 1j * rng.normal(size=k))
            z = rng.normal(size=n) + 1j * rng.normal(size=n)
            P = p.homogenize()
            x = np.concatenate([[1.0 + 0j], z])
            assert affine_section_norm(p, z, d) == pytest.approx(fs_section_norm(P, x), rel=1e-12)


class TestCoeffNorms:
    def test_monomial(self):
        assert coeff_l1_norm(hp(1, 2, {(1, 1): 1.0})) == pytest.approx(1.0)

    def test_mixed(self):
        assert coeff_l1_norm(hp(1, 2, {(2, 0): 3.0, (0, 2): -4j})) == pytest.approx(7.0)

    def test_zero(self):
        assert coeff_l1_norm(hp(1, 2, {})) == 0.0


class TestPolydiskSup:
    def test_monomial_on_torus(self):
        P = hp(1, 2, {(1, 1): 1.0})
        assert polydisk_sup_lower(P, 16) == pytest.approx(1.0)

    def test_sum_of_squares(self):
        P = hp(1, 2, {(2, 0): 1.0, (0, 2): 1.0})
        assert polydisk_sup_lower(P, 16) == pytest.approx(2.0)

    def test_doubling_monotone(self):
        rng = make_rng(7, "polydisk")
        for _ in range(10):
            P = random_hp(rng, 2, 3)
            a = polydisk_sup_lower(P, 16)
            b = polydisk_sup_lower(P, 32)
            assert b >= a - 1e-12

    def test_sample_floor(self):
        P = hp(1, 3, {(3, 0): 1.0})
        with pytest.raises(PolynomialError):
            polydisk_sup_lower(P, 4 * 3)  # needs 4d+1

    def test_budget_cap(self):
        P = hp(2, 6, {(6, 0, 0): 1.0})
        with pytest.raises(PolynomialError):
            polydisk_sup_lower(P, 48, budget_cap=100)

    def test_appendix_chain(self):
        rng = make_rng(8, "appendix-chain")
        for _ in range(50):
            n = int(rng.integers(1, 3))
            d = int(rng.integers(1, 7))
            P = random_hp(rng, n, d)
            lower = polydisk_sup_lower(P, 8 * d)
            l1 = coeff_l1_norm(P)
            assert lower <= l1 * (1 + 1e-12)
            assert l1 <= ((n + 1) * 4.0 ** (n + 1)) ** d * lower * (1 + 1e-12)


class TestExtractComponent:
    def test_affine_pair(self):
        oracle = lambda Z: 1.0 + Z[0]
        got = extract_degree_component(oracle, [1.0, 0.0], 1, 2)
        assert got == pytest.approx(1.0)

    def test_identity_case(self):
        rng = make_rng(9, "extract-id")
        P = random_hp(rng, 1, 5)
        Z = rng.normal(size=2) + 1j * rng.normal(size=2)
        got = extract_degree_component(lambda q: eval_poly(P, q), Z, 5, 6)
        assert got == pytest.approx(eval_poly(P, Z), rel=1e-10, abs=1e-10)

    def test_mixed_components(self):
        # P = Z0 + Z0^2 Z1 at (1,1): degree-3 component value is 1
        P1 = hp(1, 1, {(1, 0): 1.0})
        P3 = hp(1, 3, {(2, 1): 1.0})
        oracle = lambda Z: eval_poly(P1, Z) + eval_poly(P3, Z)
        got = extract_degree_component(oracle, [1.0, 1.0], 3, 4)
        assert got == pytest.approx(1.0, abs=1e-12)

    def test_aliasing_flagged_by_value(self):
        # N <= degree aliases: the m=0 average of Z0^2 over N=2 picks up deg 2
        oracle = lambda Z: Z[0] ** 2
        got = extract_degree_component(oracle, [1.0, 0.0], 0, 2)
        assert got == pytest.approx(1.0)  # aliased, not the true 0

    def test_component_bounded_by_orbit_max(self):
        rng = make_rng(10, "extract-bound")
        for _ in range(20):
            n = int(rng.integers(1, 3))
            d = int(rng.integers(1, 8))
            comps = {m: random_hp(rng, n, m) for m in range(d + 1)}
            oracle = lambda Z: sum(eval_poly(P, Z) for P in comps.values())
            Z = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
            N = d + 1
            orbit_max = max(abs(oracle(np.exp(2j * np.pi * j / N) * Z)) for j in range(N))
            for m in comps:
                val = extract_degree_component(oracle, Z, m, N)
                assert abs(val) <= orbit_max + 1e-10


class TestVeronesePower:
    def test_cube(self):
        P = hp(1, 1, {(1, 0): 1.0})
        Q = veronese_power(P, 3)
        assert Q.d == 3
        assert coeff_l1_norm(Q) == pytest.approx(1.0)

    def test_binomial(self):
        P = hp(1, 1, {(1, 0): 1.0, (0, 1): 1.0})
        Q = veronese_power(P, 2)
        want = {(2, 0): 1.0, (1, 1): 2.0, (0, 2): 1.0}
        got = {m.exponents: c for m, c in zip(Q.monomials, Q.coeffs) if c != 0}
        assert {k: pytest.approx(v) for k, v in got.items()} == want

    def test_norm_identity(self):
        rng = make_rng(11, "veronese")
        P = random_hp(rng, 2, 2)
        Q = veronese_power(P, 2)
        for _ in range(10):
            Z = rng.normal(size=3) + 1j * rng.normal(size=3)
            a = fs_section_norm(Q, Z)
            b = fs_section_norm(P, Z) ** 2
            assert abs(a - b) <= 1e-10 * max(1.0, b)

    def test_degree_cap(self):
        P = hp(1, 20, {(20, 0): 1.0})
        with pytest.raises(PolynomialError):
            veronese_power(P, 5)


def test_json_round_trip():
    rng = make_rng(12, "json")
    P = random_hp(rng, 2, 3)
    Q = HomogeneousPolynomial.from_json_dict(P.to_json_dict())
    assert Q.n == P.n and Q.d == P.d
    assert np.allclose(Q.coeffs, P.coeffs)

import numpy as np
import pytest

from prohull.compacta import ProjectivePoint, exp_graph_compactum
from prohull.extremal import BRACKETED, INTERPOLATION
from prohull.scanner import (
    CONVERGED,
    DIVERGING,
    INCONCLUSIVE,
    GridSpec,
    classify,
    discrete_laplacian,
    harmonicity_residual,
    scan,
)


def circle_lam(z):
    return float(np.log(max(1.0, abs(z))) - 0.5 * np.log((1 + abs(z) ** 2) / 2))


class TestClassify:
    def test_constant_stream(self):
        rows = [(d, 0.3466, 0.3470, BRACKETED) for d in (2, 4, 8, 16)]
        assert classify(rows) == CONVERGED

    def test_log_growth(self):
        rows = [(d, 0.1 * np.log2(d), 0.1 * np.log2(d) + 1e-3, BRACKETED)
                for d in (2, 4, 8, 16)]
        assert classify(rows, tau_grow=0.05) == DIVERGING

    def test_single_degree(self):
        assert classify([(4, 0.2, 0.3, BRACKETED)]) == INCONCLUSIVE

    def test_interpolation_dominant(self):
        rows = [(8, np.inf, np.inf, INTERPOLATION), (12, np.inf, np.inf, INTERPOLATION)]
        assert classify(rows) == INTERPOLATION

    def test_slow_drift_inconclusive(self):
        rows = [(d, 0.04 * np.log2(d), 1.0, BRACKETED) for d in (2, 4, 8, 16)]
        assert classify(rows, tau_conv=0.01, tau_grow=0.1) == INCONCLUSIVE


class TestScan:
    def test_circle_field_matches_closed_form(self, circle256):
        grid = GridSpec("points", {"points": [[z] for z in
                                              (0.0, 0.5, 1.0, 1.5 + 0.5j, 2.0, -2.5, 3.0j)]})
        field = scan(circle256, "z0", grid, [4, 8])
        assert len(field.cells) == 7
        for cell in field.cells:
            assert cell.classification == CONVERGED
            top = cell.results[-1]
            target = circle_lam(cell.z[0])
            assert top.lam_lo - 1e-2 <= target <= top.lam_hi + 1e-2

    def test_exp_graph_on_off(self, exp_graph):
        pts = [[0.2, np.exp(0.2)], [0.35j, np.exp(0.35j)],
               [0.0, 2.0], [0.3, 2 * np.exp(0.3)]]
        grid = GridSpec("points", {"points": pts})
        field = scan(exp_graph, "z0", grid, [1, 2, 3])
        cls = field.classifications()
        assert cls[0] == CONVERGED and cls[1] == CONVERGED
        assert cls[2] == DIVERGING and cls[3] == DIVERGING

    def test_on_k_label(self, circle64):
        z = circle64.points[3].rep[1] / circle64.points[3].rep[0]
        grid = GridSpec("points", {"points": [[z]]})
        field = scan(circle64, "z0", grid, [2, 4])
        assert field.cells[0].on_k
        assert field.cells[0].classification == CONVERGED

    def test_empty_degrees(self, circle64):
        with pytest.raises(ValueError):
            scan(circle64, "z0", GridSpec("points", {"points": [[0.0]]}), [])

    def test_thread_determinism(self, circle64):
        grid = GridSpec("cartesian", {"re_min": 1.2, "re_max": 2.0,
                                      "im_min": -0.4, "im_max": 0.4, "steps": 3})
        a = scan(circle64, "z0", grid, [2, 4], threads=1)
        b = scan(circle64, "z0", grid, [2, 4], threads=4)
        for ca, cb in zip(a.cells, b.cells):
            assert ca.z == cb.z
            for ra, rb in zip(ca.results, cb.results):
                assert ra.lam_lo == rb.lam_lo and ra.lam_hi == rb.lam_hi

    def test_zariski_consistency(self, circle256, exp_graph):
        # converged cells must hug the generating curve (circle and conic)
        from prohull.compacta import CurveGenerator, sample

        grid = GridSpec("points", {"points": [[1.05 * np.exp(0.3j)], [2.0], [0.5]]})
        field = scan(circle256, "z0", grid, [4, 8])
        for cell in field.cells:
            assert cell.classification == CONVERGED  # the circle hull is all of P^1
        conic = sample(CurveGenerator("entire_graph",
                                      {"taylor": [0.0, 0.0, 1.0], "radius": 0.8}), 64)
        on = [0.3, 0.3**2]
        off = [0.3, 0.3**2 + 1.0]
        field = scan(conic, "z0", GridSpec("points", {"points": [on, off]}), [2, 3, 4])
        # converged cells satisfy the defining equation; the off cell does not
        # converge (its degree->oo stream is unbounded: the quadric vanishes on K)
        assert field.cells[0].classification == CONVERGED
        assert abs(on[1] - on[0] ** 2) < 1e-12
        assert field.cells[1].classification != CONVERGED
        assert abs(off[1] - off[0] ** 2) > 0.5


class TestHarmonicity:
    def test_constant_field_zero_residual(self):
        assert discrete_laplacian(lambda t: 5.0, 1.5 + 0.5j, 0.1) == pytest.approx(0.0, abs=1e-9)

    def test_annulus_residual_decay(self, circle256):
        centers = [r * np.exp(2j * np.pi * k / 6) for r in (1.4, 1.7) for k in range(6)]
        res = {}
        for h in (0.1, 0.05):
            res[h] = harmonicity_residual(circle256, lambda t: [t], centers, h, 8)["max_residual"]
        assert res[0.05] <= 0.6 * res[0.1] + 1e-4

    def test_inside_disk_flat(self, circle256):
        centers = [0.0, 0.2 + 0.1j, -0.3j]
        rep = harmonicity_residual(circle256, lambda t: [t], centers, 0.1, 8)
        # field is constant inside: residual at bracket-noise scale
        assert rep["max_residual"] <= 5e-3

    def test_grid_touching_k_rejected(self, circle64):
        with pytest.raises(ValueError):
            harmonicity_residual(circle64, lambda t: [t], [1.0 + 0.0j], 0.05, 4)

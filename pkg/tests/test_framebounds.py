"""Frame-bound machinery: Theta, Gamma, lattice sums, certification."""

import math

import numpy as np
import pytest

from shearframes.filters import _AxisTable, Generator
from shearframes.framebounds import (
    FrequencyGrid,
    default_grid,
    empirical_frame_check,
    estimate_bounds,
    gamma,
    r_of_c,
    theta,
)
from shearframes.systems import (
    SystemSpec,
    make_classical_system,
    make_compact_system,
    scaling_matrix,
    shear_matrix,
    shear_range,
)


def _null_system() -> SystemSpec:
    """Compact-shaped system whose generators are identically zero."""
    zero_tab = _AxisTable(lambda t: np.zeros_like(np.asarray(t, dtype=float),
                                                  dtype=complex), 1.0, step=0.25)
    def zero_spec(*args):
        return np.zeros_like(np.asarray(args[0], dtype=float), dtype=complex)
    gen = Generator(dim=2, kind="compact-separable", role="shearlet",
                    spectrum=zero_spec, factors=(zero_tab, zero_tab),
                    decay_params=(9.0, 8.0))
    sca = Generator(dim=2, kind="compact-separable", role="scaling",
                    spectrum=zero_spec, factors=(zero_tab, zero_tab),
                    decay_params=(float("nan"), 8.0))
    return SystemSpec(dim=2, J_max=4, c=(1.0, 1.0),
                      generators={"scaling": sca, "h": gen, "v": gen},
                      kind="compact-separable", completion=False)


class TestTheta:
    def test_zero_generators(self):
        zero = lambda a, b: 0.0
        assert theta(zero, zero, zero, (1.0, 2.0), (0.5, 0.5), J_cap=3) == 0.0

    def test_classical_parseval_value(self, classical):
        phi = classical.generators["scaling"]
        psi = classical.generators["h"]
        psih = lambda a, b: psi.spectrum(a, b)
        psith = lambda a, b: psi.spectrum(b, a)
        phih = lambda a, b: phi.spectrum(a, b)
        # cone-interior points: the raw partial sum double counts inside
        # the boundary-shear overlap wedge near the seam (|ratio| above
        # roughly 0.47), which the certification path removes by the
        # seam rule; the Parseval value 1 holds away from it
        for xi in [(2.0, 0.5), (7.3, 2.1), (1.5, -0.6), (-4.0, 1.3)]:
            val = theta(phih, psih, psith, xi, (0.0, 0.0), J_cap=14)
            assert val == pytest.approx(1.0, abs=1e-6)

    def test_matches_matrix_oracle(self, compact2d):
        """Independent loop written with explicit matrix products."""
        psi = compact2d.generators["h"]
        phi = compact2d.generators["scaling"]
        xi = np.array([0.7, -0.3])
        omega = np.array([0.4, 0.2])
        J_cap = 2
        want = abs(complex(phi.spectrum(*xi))) * abs(complex(phi.spectrum(*(xi + omega))))
        for j in range(J_cap):
            r = shear_range(j)
            A_inv = np.linalg.inv(scaling_matrix(2, "A", j))
            At_inv = np.linalg.inv(scaling_matrix(2, "At", j))
            for k in range(-r, r + 1):
                St = shear_matrix(2, "S", k).T
                eta = St @ A_inv @ xi
                want += (abs(complex(psi.spectrum(*eta)))
                         * abs(complex(psi.spectrum(*(eta + omega)))))
                S = shear_matrix(2, "S", k)
                zeta = S @ At_inv @ xi
                # the swapped generator evaluates with swapped arguments
                want += (abs(complex(psi.spectrum(zeta[1], zeta[0])))
                         * abs(complex(psi.spectrum(zeta[1] + omega[1],
                                                    zeta[0] + omega[0]))))
        psih = lambda a, b: psi.spectrum(a, b)
        psith = lambda a, b: psi.spectrum(b, a)
        phih = lambda a, b: phi.spectrum(a, b)
        got = theta(phih, psih, psith, tuple(xi), tuple(omega), J_cap=J_cap)
        assert got == pytest.approx(want, rel=1e-10)

    def test_rejects_bad_cap(self, compact2d):
        zero = lambda a, b: 0.0
        with pytest.raises(ValueError):
            theta(zero, zero, zero, (0, 0), (0, 0), J_cap=0)


class TestGamma:
    def test_gamma0_peak(self, compact2d):
        grid = FrequencyGrid(16.0, 128)
        val = gamma(0, (0.0, 0.0), grid, compact2d, J_cap=6)
        assert val == pytest.approx(1.0, abs=1e-6)

    def test_nonnegative(self, compact2d):
        grid = FrequencyGrid(16.0, 64)
        for omega in [(0.3, -0.2), (2.0, 1.0)]:
            assert gamma(1, omega, grid, compact2d, J_cap=5) >= 0.0

    def test_far_shift_vanishes(self, compact2d):
        grid = FrequencyGrid(16.0, 128)
        assert gamma(1, (1e3, 0.0), grid, compact2d, J_cap=6) < 1e-6
        assert gamma(2, (0.0, 1e3), grid, compact2d, J_cap=6) < 1e-6

    def test_refinement_monotone(self, compact2d):
        base = FrequencyGrid(16.0, 96)
        fine = base.refined(2)
        assert set(base.axis()).issubset(set(fine.axis()))
        for i in (0, 1):
            a = gamma(i, (0.25, 0.1), base, compact2d, J_cap=5)
            b = gamma(i, (0.25, 0.1), fine, compact2d, J_cap=5)
            assert b >= a - 1e-14

    def test_rejects_bad_component(self, compact2d):
        with pytest.raises(ValueError):
            gamma(3, (0, 0), FrequencyGrid(8, 32), compact2d)


class TestLatticeSum:
    def test_zero_generators(self):
        assert r_of_c(_null_system(), (1.0, 1.0), m_radius=4) == 0.0

    def test_monotone_in_c(self, compact2d_half):
        grid = default_grid(compact2d_half, 10, 256)
        r_half = r_of_c(compact2d_half, (0.25, 0.25), grid, m_radius=4, J_cap=10)
        r_one = r_of_c(compact2d_half, (0.5, 0.5), grid, m_radius=4, J_cap=10)
        assert r_half <= r_one + 1e-12

    def test_small_c_certifies(self, compact2d_half):
        rep = estimate_bounds(
            make_compact_system(dim=2, K=15, L=10, J_max=8, c=(0.1, 0.1)),
            J_cap=10, m_radius=4)
        assert rep.R_c < rep.L_inf_est
        assert rep.certified

    def test_rejects_bad_args(self, compact2d):
        with pytest.raises(ValueError):
            r_of_c(compact2d, (0.0, 1.0))
        with pytest.raises(ValueError):
            r_of_c(compact2d, (1.0, 1.0), m_radius=0)


class TestEstimateBounds:
    def test_classical_parseval(self, classical):
        rep = estimate_bounds(classical, J_cap=10, m_radius=8)
        assert 0.9 <= rep.A_lower <= 1.1
        assert 0.9 <= rep.B_upper <= 1.1
        assert rep.certified
        assert rep.R_c == pytest.approx(0.0, abs=1e-12)

    def test_zero_generators_not_certified(self):
        rep = estimate_bounds(_null_system(), m_radius=2, J_cap=4)
        assert not rep.certified
        assert rep.A_lower <= 0.0

    def test_rejects_3d(self, compact3d):
        with pytest.raises(ValueError):
            estimate_bounds(compact3d)

    def test_report_fields(self, compact2d):
        rep = estimate_bounds(compact2d, J_cap=8, m_radius=2,
                              grid=FrequencyGrid(16.0, 128))
        assert rep.A_lower == pytest.approx(
            (rep.L_inf_est - rep.R_c) / rep.det_Mc)
        assert rep.B_upper == pytest.approx(
            (rep.L_sup_est + rep.R_c) / rep.det_Mc)
        text = rep.to_text()
        assert "certified" in text
        assert len(rep.as_rows()) >= 10


class TestEmpirical:
    def test_classical_parseval_montecarlo(self, classical):
        A, B = empirical_frame_check(classical, n_random=20, extents=(64, 64))
        assert A == pytest.approx(1.0, abs=1e-3)
        assert B == pytest.approx(1.0, abs=1e-3)

    def test_compact_inside_sandwich(self, compact2d_half):
        rep = estimate_bounds(compact2d_half, J_cap=10)
        A, B = empirical_frame_check(compact2d_half, n_random=10, extents=(64, 64))
        assert A >= rep.A_lower * 0.95
        assert B <= rep.B_upper * 1.05

    def test_rejects_bad_count(self, classical):
        with pytest.raises(ValueError):
            empirical_frame_check(classical, n_random=0)

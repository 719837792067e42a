"""Filter construction: closed form, factorization, generators."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shearframes.filters import (
    FactorizationError,
    ParameterError,
    bump_window,
    classical_bandlimited_2d,
    compact_scaling_2d,
    compact_shearlet_2d,
    compact_shearlets_3d,
    meyer_ramp,
    radial_window_sq,
    scale_cover,
    scaling_spectrum,
    spectral_factorize,
    squared_lowpass_magnitude,
    squared_lowpass_magnitude_hp,
    _compact_factors,
    _tables_for,
)


def exact_quarter_value(K, L):
    """Closed form at xi = 1/4 in exact rational arithmetic."""
    s = Fraction(0)
    for n in range(L):
        s += math.comb(K - 1 + n, n) * Fraction(1, 2) ** n
    return Fraction(1, 2) ** K * s


class TestSquaredLowpass:
    def test_at_zero(self):
        assert squared_lowpass_magnitude(15, 10, 0.0) == pytest.approx(1.0, abs=0)

    def test_at_half(self):
        assert squared_lowpass_magnitude(15, 10, 0.5) == pytest.approx(0.0, abs=1e-30)

    def test_exact_rational_oracle_at_quarter(self):
        for K, L in [(15, 10), (30, 15), (39, 19)]:
            want = float(exact_quarter_value(K, L))
            got = squared_lowpass_magnitude(K, L, 0.25)
            assert abs(got - want) <= 1e-12 * abs(want)

    def test_high_precision_oracle_random_points(self, rng):
        for xi in rng.uniform(-1, 1, 8):
            want = float(squared_lowpass_magnitude_hp(15, 10, xi))
            got = squared_lowpass_magnitude(15, 10, xi)
            assert got == pytest.approx(want, rel=1e-12, abs=1e-300)

    def test_parameter_constraints(self):
        with pytest.raises(ParameterError):
            squared_lowpass_magnitude(9, 7, 0.1)
        with pytest.raises(ParameterError):
            squared_lowpass_magnitude(100, 10, 0.1)  # K > 3L-2
        squared_lowpass_magnitude(9, 7, 0.1, relaxed=True)

    @settings(max_examples=50, deadline=None)
    @given(xi=st.floats(-4, 4, allow_nan=False),
           K=st.integers(1, 20), L=st.integers(1, 12))
    def test_nonnegative_and_even(self, xi, K, L):
        a = squared_lowpass_magnitude(K, L, xi, relaxed=True)
        b = squared_lowpass_magnitude(K, L, -xi, relaxed=True)
        assert a >= 0.0
        assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


class TestFactorization:
    @pytest.mark.parametrize("K,L", [(15, 10), (30, 15), (39, 19)])
    def test_grid_residual(self, K, L):
        pair = spectral_factorize(K, L)
        grid = np.arange(4096) / 4096.0
        resid = np.abs(np.abs(pair.h0_transfer(grid)) ** 2
                       - squared_lowpass_magnitude(K, L, grid))
        assert resid.max() < 1e-8

    def test_dc_gain(self, pair15):
        assert pair15.h0.sum() == pytest.approx(1.0, abs=1e-14)

    def test_strict_mode_rejects(self):
        with pytest.raises(ParameterError):
            spectral_factorize(9, 7)

    def test_relaxed_mode_accepts(self):
        pair = spectral_factorize(4, 4, relaxed=True)
        assert pair.n_taps == 8

    def test_minimum_phase(self, pair15):
        # divide out the K-fold zero at z = -1 first: a companion-matrix
        # eigensolve cannot resolve a multiple root, so test only the
        # factorized part (zeros at the reciprocals of the kept roots)
        K = pair15.K
        cos_part = np.array([math.comb(K, n) / 2.0 ** K for n in range(K + 1)])
        quot, rem = np.polydiv(pair15.h0[::-1], cos_part[::-1])
        assert np.abs(rem).max() < 1e-10
        roots = np.roots(quot)
        assert np.all(np.abs(roots) >= 1.0 - 1e-6)

    def test_bandpass_modulation(self, pair15, rng):
        xi = rng.uniform(-1, 1, 16)
        lhs = np.abs(pair15.h1_transfer(xi)) ** 2
        rhs = np.abs(pair15.h0_transfer(xi + 0.5)) ** 2
        # near the high-order zero both sides are pure rounding noise,
        # so the comparison needs an absolute floor
        np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-13)


class TestScalingSpectrum:
    def test_value_at_zero(self, pair15):
        assert scaling_spectrum(pair15, 0.0, 20) == pytest.approx(1.0, abs=1e-14)

    def test_truncation_convergence(self, pair15):
        a = scaling_spectrum(pair15, 0.25, 20)
        b = scaling_spectrum(pair15, 0.25, 40)
        assert abs(a - b) <= 1e-10

    def test_decay(self, pair15):
        assert scaling_spectrum(pair15, 2.0 ** 10, 30) < 1e-6

    def test_rejects_bad_truncation(self, pair15):
        with pytest.raises(ParameterError):
            scaling_spectrum(pair15, 0.1, 0)


class TestCompactGenerators:
    def test_vanishing_at_zero(self, pair15):
        gen = compact_shearlet_2d(pair15)
        vals = gen.spectrum(np.zeros(4), np.linspace(-1, 1, 4))
        assert np.abs(vals).max() < 1e-12

    def test_even_magnitude_in_xi2(self, pair15, rng):
        gen = compact_shearlet_2d(pair15)
        x1 = rng.uniform(-2, 2, 32)
        x2 = rng.uniform(-2, 2, 32)
        a = np.abs(gen.spectrum(x1, x2))
        b = np.abs(gen.spectrum(x1, -x2))
        np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-14)

    def test_decay_grades_15(self, pair15):
        gen = compact_shearlet_2d(pair15)
        alpha, gamma = gen.decay_params
        assert alpha > gamma > 3.0
        assert gen.frame_grade()
        assert gen.sparsity_grade()  # alpha > 5, gamma >= 4

    def test_decay_grades_39(self, pair39):
        gen = compact_shearlet_2d(pair39)
        assert gen.gamma >= 4.0
        assert gen.alpha > 8.0

    def test_table_accuracy(self, pair15, rng):
        t_phi, t_g1, t_g2 = _tables_for(pair15)
        phihat, g1, g2 = _compact_factors(pair15)
        x = rng.uniform(-3, 3, 200)
        assert np.abs(t_g1(x) - g1(x)).max() < 5e-5
        assert np.abs(t_g2(x) - g2(x)).max() < 5e-5
        assert np.abs(t_phi(x) - phihat(x)).max() < 5e-5

    def test_3d_permutations(self, pair15, rng):
        p1, p2, p3 = compact_shearlets_3d(pair15)
        x = rng.uniform(-1, 1, (3, 16))
        np.testing.assert_allclose(p2.spectrum(x[0], x[1], x[2]),
                                   p1.spectrum(x[1], x[0], x[2]),
                                   rtol=1e-12, atol=1e-300)
        np.testing.assert_allclose(p3.spectrum(x[0], x[1], x[2]),
                                   p1.spectrum(x[2], x[1], x[0]),
                                   rtol=1e-12, atol=1e-300)
        vals = p1.spectrum(np.zeros(8), x[1][:8], x[2][:8])
        assert np.abs(vals).max() < 1e-12

    def test_3d_alpha_grade(self, pair15):
        p1, _, _ = compact_shearlets_3d(pair15)
        assert p1.alpha > 8.0 and p1.gamma >= 4.0

    def test_scaling_conjugate_symmetry(self, pair15, rng):
        gen = compact_scaling_2d(pair15)
        x1, x2 = rng.uniform(-2, 2, 16), rng.uniform(-2, 2, 16)
        np.testing.assert_allclose(gen.spectrum(-x1, -x2),
                                   np.conj(gen.spectrum(x1, x2)),
                                   rtol=1e-10, atol=1e-14)


class TestClassicalWindows:
    def test_meyer_ramp_partition(self):
        t = np.linspace(0, 1, 101)
        np.testing.assert_allclose(meyer_ramp(t) + meyer_ramp(1 - t), 1.0,
                                   rtol=0, atol=1e-13)

    def test_calderon_sum_at_one(self):
        total = sum(radial_window_sq(2.0 ** -j) for j in range(-20, 21))
        assert total == pytest.approx(1.0, abs=1e-10)

    def test_calderon_log_grid(self):
        for t in np.geomspace(2.0 ** -8, 2.0 ** 8, 50):
            total = sum(radial_window_sq(t * 2.0 ** -j) for j in range(-30, 31))
            assert total == pytest.approx(1.0, abs=1e-10)

    def test_bump_partition(self):
        xi = np.linspace(-1, 1, 41)
        total = sum(bump_window(xi + k) ** 2 for k in (-1, 0, 1))
        np.testing.assert_allclose(total, 1.0, rtol=0, atol=1e-10)
        assert bump_window(0.0) ** 2 + bump_window(1.0) ** 2 \
            + bump_window(-1.0) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_support(self):
        phi, psi = classical_bandlimited_2d()
        vals = psi.spectrum(np.full(5, 0.1), np.linspace(-1, 1, 5))
        assert np.abs(vals).max() == 0.0  # 0.1 is below the octave band

    def test_scale_cover_completeness(self):
        t = np.geomspace(0.25, 100, 64)
        np.testing.assert_allclose(scale_cover(t), 1.0, rtol=0, atol=1e-12)

    def test_plane_tiling(self, rng):
        phi, psi = classical_bandlimited_2d()
        pts = rng.uniform(-20, 20, (2, 64))
        total = np.abs(phi.spectrum(pts[0], pts[1])) ** 2
        for j in range(24):
            r = math.ceil(2.0 ** (j / 2.0))
            for k in range(-r, r + 1):
                e1 = 2.0 ** -j * pts[0]
                e2 = k * 2.0 ** -j * pts[0] + 2.0 ** (-j / 2.0) * pts[1]
                horiz = np.abs(pts[1]) <= np.abs(pts[0])
                total += np.abs(psi.spectrum(e1, e2)) ** 2 * horiz
                f1 = 2.0 ** (-j / 2.0) * pts[0] + k * 2.0 ** -j * pts[1]
                f2 = 2.0 ** -j * pts[1]
                total += np.abs(psi.spectrum(f2, f1)) ** 2 * ~horiz
        np.testing.assert_allclose(total, 1.0, rtol=0, atol=1e-9)

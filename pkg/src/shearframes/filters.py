"""Construction of 1D filters and 2D/3D shearlet generators.

Two families are provided:

* Compactly supported separable generators built from a parametric
  low-pass filter.  The squared magnitude of the low pass is the
  closed form ``(cos pi*xi)^(2K) * sum_{n<L} C(K-1+n, n) (sin pi*xi)^(2n)``;
  an FIR filter realising it is recovered by minimum-phase spectral
  factorization, the scaling spectrum is the usual infinite product of
  dilated transfer functions, and the shearlet spectrum is
  ``H1(4 xi1) phihat(xi1) phihat(2 xi2)`` (plus coordinate permutations
  in 3D).

* Band-limited "classical" generators assembled from polynomial-ramp
  windows.  These tile the frequency plane exactly and serve as the
  Parseval reference system.  The radial octave window is supported on
  ``[1/8, 1/2]`` so that integer translates of every band are alias
  free; the scaling window fills the remaining low-frequency square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import mpmath as mp

__all__ = [
    "FilterPair",
    "Generator",
    "FactorizationError",
    "ParameterError",
    "squared_lowpass_magnitude",
    "squared_lowpass_magnitude_hp",
    "spectral_factorize",
    "scaling_spectrum",
    "compact_shearlet_2d",
    "compact_scaling_2d",
    "compact_shearlets_3d",
    "compact_scaling_3d",
    "classical_bandlimited_2d",
    "meyer_ramp",
    "fit_decay_params",
]


class ParameterError(ValueError):
    """Filter parameters outside the admissible range."""


class FactorizationError(RuntimeError):
    """Spectral factorization failed; carries the residual achieved."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


def _check_params(K: int, L: int, relaxed: bool) -> None:
    if not (isinstance(K, (int, np.integer)) and isinstance(L, (int, np.integer))):
        raise ParameterError("K and L must be integers")
    if K < 1 or L < 1:
        raise ParameterError(f"K={K}, L={L}: both must be >= 1")
    if relaxed:
        return
    if L < 10:
        raise ParameterError(f"L={L} < 10 violates the strict parameter range")
    if not (3 * L <= 2 * K <= 2 * (3 * L - 2)):
        raise ParameterError(
            f"K={K} outside [3L/2, 3L-2] = [{3 * L / 2:g}, {3 * L - 2}] for L={L}"
        )


def squared_lowpass_magnitude(K: int, L: int, xi, relaxed: bool = False):
    """Closed-form squared magnitude of the low-pass filter.

    Evaluates ``(cos pi*xi)^(2K) * sum_{n=0}^{L-1} C(K-1+n, n) (sin pi*xi)^(2n)``
    by a Horner recursion in ``sin^2(pi*xi)``.  All terms are positive, so
    the recursion is forward stable; the binomial coefficients are exact
    in double precision for every K, L admitted by the strict range.

    Parameters
    ----------
    K, L : int
        Cosine half-order and length of the sine series.  The strict
        range ``L >= 10``, ``3L/2 <= K <= 3L-2`` is enforced unless
        `relaxed` is set (small parameters are handy in unit tests).
    xi : float or ndarray
        Frequency in cycles (the function has period 1).
    """
    _check_params(K, L, relaxed)
    xi = np.asarray(xi, dtype=float)
    y = np.sin(np.pi * xi) ** 2
    acc = np.zeros_like(y)
    for n in range(L - 1, -1, -1):
        acc = acc * y + math.comb(K - 1 + n, n)
    out = np.cos(np.pi * xi) ** (2 * K) * acc
    return out if out.ndim else float(out)


def squared_lowpass_magnitude_hp(K: int, L: int, xi, dps: int = 50):
    """Arbitrary-precision evaluation of the closed form (oracle path).

    Returns an ``mpmath.mpf``.  Used by tests as an independent check of
    the fast evaluator and of factorized filters.
    """
    _check_params(K, L, relaxed=True)
    with mp.workdps(dps):
        x = mp.mpf(xi)
        y = mp.sin(mp.pi * x) ** 2
        acc = mp.mpf(0)
        for n in range(L - 1, -1, -1):
            acc = acc * y + math.comb(K - 1 + n, n)
        return mp.cos(mp.pi * x) ** (2 * K) * acc


def _transfer(taps: np.ndarray, xi) -> np.ndarray:
    """DTFT ``sum_n taps[n] exp(-2 pi i n xi)`` via Horner."""
    z = np.exp(-2j * np.pi * np.asarray(xi, dtype=float))
    acc = np.zeros_like(z)
    for c in taps[::-1]:
        acc = acc * z + c
    return acc


@dataclass(frozen=True)
class FilterPair:
    """Low-pass/band-pass FIR pair realising the closed-form magnitude.

    ``h1[n] = (-1)^n h0[n]`` so that the band-pass transfer function is
    the half-period modulation of the low-pass one.
    """

    K: int
    L: int
    h0: np.ndarray
    h1: np.ndarray
    relaxed: bool = False

    @property
    def n_taps(self) -> int:
        return len(self.h0)

    def h0_transfer(self, xi) -> np.ndarray:
        return _transfer(self.h0, xi)

    def h1_transfer(self, xi) -> np.ndarray:
        return _transfer(self.h1, xi)

    def dc_group_delay(self) -> float:
        """First moment of h0; the phase slope of the transfer at DC."""
        return float(np.dot(np.arange(self.n_taps), self.h0))


def spectral_factorize(K: int, L: int, relaxed: bool = False,
                       dps: int = 80, residual_tol: float = 1e-8) -> FilterPair:
    """Minimum-phase FIR filter whose squared magnitude is the closed form.

    The cosine part factors analytically as ``((1+z)/2)^K``.  The sine
    series ``P(y) = sum C(K-1+n,n) y^n`` is factorized over its roots:
    initial root estimates come from a companion-matrix eigensolve and
    are polished by Newton iteration on the exact integer-coefficient
    polynomial in extended precision.  Each root ``y_r`` maps to the
    quadratic ``z^2 - (2-4y_r) z + 1``, from which the root inside the
    unit circle is kept.

    Raises
    ------
    FactorizationError
        If Newton polishing stalls or the assembled filter misses the
        closed form by more than `residual_tol` on a 4096-point grid.
    """
    _check_params(K, L, relaxed)
    pcoeffs = [math.comb(K - 1 + n, n) for n in range(L)]

    with mp.workdps(dps):
        if L == 1:
            zroots: list = []
        else:
            raw = np.roots(np.array(pcoeffs[::-1], dtype=float))
            yroots = []
            for y0 in sorted(raw, key=lambda r: (round(r.real, 12), round(r.imag, 12))):
                y = mp.mpc(y0)
                for _ in range(80):
                    p = mp.mpf(0)
                    dp = mp.mpf(0)
                    for c in pcoeffs[::-1]:
                        dp = dp * y + p
                        p = p * y + c
                    if dp == 0:
                        break
                    step = p / dp
                    y -= step
                    if abs(step) < mp.mpf(10) ** (-dps + 8):
                        break
                else:
                    raise FactorizationError(
                        f"Newton polishing did not converge for (K={K}, L={L})",
                        residual=float(abs(step)),
                    )
                yroots.append(y)
            zroots = []
            for y in yroots:
                b = 2 - 4 * y
                disc = mp.sqrt(b * b - 4)
                z1 = (b + disc) / 2
                z2 = (b - disc) / 2
                zroots.append(z1 if abs(z1) <= abs(z2) else z2)

        # assemble taps: ((1 + x)/2)^K  *  prod_r (1 - z_r x),  x = z^{-1}
        q = [mp.mpc(1)]
        for z in zroots:
            nxt = [mp.mpc(0)] * (len(q) + 1)
            for i, c in enumerate(q):
                nxt[i] += c
                nxt[i + 1] -= c * z
            q = nxt
        cosp = [mp.mpf(math.comb(K, n)) / mp.mpf(2) ** K for n in range(K + 1)]
        full = [mp.mpc(0)] * (len(cosp) + len(q) - 1)
        for i, a in enumerate(cosp):
            for j, b2 in enumerate(q):
                full[i + j] += a * b2
        total = sum(full)
        full = [c / total for c in full]
        imag_resid = max(abs(mp.im(c)) for c in full)
        h0 = np.array([float(mp.re(c)) for c in full])

    if imag_resid > 1e-20:
        raise FactorizationError(
            f"root pairing left imaginary residue {float(imag_resid):.3e}",
            residual=float(imag_resid),
        )
    grid = np.arange(4096) / 4096.0
    resid = np.abs(
        np.abs(_transfer(h0, grid)) ** 2
        - squared_lowpass_magnitude(K, L, grid, relaxed=True)
    ).max()
    if resid > residual_tol:
        raise FactorizationError(
            f"factorization residual {resid:.3e} exceeds {residual_tol:.1e}",
            residual=float(resid),
        )
    h1 = h0 * ((-1.0) ** np.arange(len(h0)))
    return FilterPair(K=int(K), L=int(L), h0=h0, h1=h1, relaxed=relaxed)


def scaling_spectrum(pair: FilterPair, xi, J_trunc: int = 30):
    """Magnitude of the truncated scaling-spectrum product.

    Returns ``|prod_{j=0}^{J_trunc-1} H0(2^-j xi)|``.  The magnitude is
    reported because the omitted factors differ from 1 only by a phase
    of order ``2^-J_trunc |xi|`` plus a second-order magnitude defect,
    so the magnitude converges quadratically in the truncation level
    while the phase converges only linearly.
    """
    if J_trunc < 1:
        raise ParameterError("J_trunc must be >= 1")
    return np.abs(_scaling_complex(pair, xi, J_trunc))


def _scaling_complex(pair: FilterPair, xi, J_trunc: int = 30) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    out = np.ones(xi.shape, dtype=complex)
    for j in range(J_trunc):
        out *= pair.h0_transfer(xi * 2.0 ** (-j))
    return out


# ---------------------------------------------------------------------------
# fast axis-factor evaluation
# ---------------------------------------------------------------------------

class _AxisTable:
    """Cubic interpolation table for a complex axis factor.

    The grid step is chosen against the factor's phase slope (group
    delay of the minimum-phase cascade) so that four-point Catmull-Rom
    interpolation of the raw complex values stays accurate without a
    per-call demodulation.  Outside ``[-extent, extent]`` the factor is
    treated as zero.
    """

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], extent: float,
                 step: float | None = None):
        self.extent = float(extent)
        if step is None:
            probe = np.linspace(0.0, extent, 2048)
            vals = fn(probe)
            strong = np.abs(vals) > 0.05 * np.abs(vals).max()
            slope = 0.0
            if strong.sum() > 8:
                ph = np.unwrap(np.angle(vals[strong]))
                slope = abs(float(np.polyfit(probe[strong], ph, 1)[0]))
            # keep the phase advance per step below ~0.1 rad
            step = 2.0 ** -11
            while slope * step > 0.1 and step > 2.0 ** -16:
                step /= 2.0
        self.step = float(step)
        n = int(math.ceil(self.extent / self.step)) + 4
        self.grid = np.arange(-n, n + 1) * self.step
        self.values = fn(self.grid)
        self.n0 = n

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        x = t / self.step + self.n0
        i = np.clip(np.floor(x).astype(np.int64), 1, len(self.grid) - 3)
        s = x - i
        vm1 = self.values[i - 1]
        v0 = self.values[i]
        v1 = self.values[i + 1]
        v2 = self.values[i + 2]
        # Catmull-Rom
        out = (
            v0
            + 0.5 * s * (v1 - vm1
                         + s * (2 * vm1 - 5 * v0 + 4 * v1 - v2
                                + s * (3 * (v0 - v1) + v2 - vm1)))
        )
        mask = np.abs(t) > self.extent
        if out.ndim:
            out[mask] = 0.0
            return out
        return np.where(mask, 0.0 + 0.0j, out)


def _effective_extent(fn, start: float, tol: float, t_max: float = 4096.0) -> float:
    """Smallest t beyond which |fn| stays below tol (scanned coarsely)."""
    t = np.geomspace(max(start, 1e-3), t_max, 4096)
    v = np.abs(fn(t))
    above = np.where(v > tol)[0]
    if len(above) == 0:
        return float(start)
    return float(t[min(above[-1] + 1, len(t) - 1)])


def fit_decay_params(axis_fn: Callable[[np.ndarray], np.ndarray],
                     vanish_fn: Callable[[np.ndarray], np.ndarray] | None = None,
                     floor: float = 1e-10) -> tuple[float, float]:
    """Fit (alpha, gamma) envelope exponents of a 1D spectrum factor.

    gamma is the decay exponent of the upper envelope of ``|axis_fn|``
    fitted on block maxima over a log grid; alpha is the vanishing-order
    exponent of ``|vanish_fn|`` near zero (fitted where the values sit
    safely above the double-precision cancellation floor).
    """
    # gamma: block peaks of |axis_fn| on [t0, T]
    peak = float(np.abs(axis_fn(np.linspace(0.01, 2.0, 512))).max())
    t_hi = _effective_extent(axis_fn, 1.0, floor * peak)
    t_lo = min(2.0, t_hi / 8)
    t = np.geomspace(t_lo, max(t_hi, 4 * t_lo), 1 << 14)
    v = np.abs(axis_fn(t))
    edges = np.geomspace(t[0], t[-1], 20)
    pk_t, pk_v = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        m = (t >= a) & (t < b) & (v > floor * peak)
        if m.any():
            i = np.argmax(v[m])
            pk_t.append(t[m][i])
            pk_v.append(v[m][i])
    if len(pk_t) >= 3:
        gamma = -float(np.polyfit(np.log(pk_t), np.log(pk_v), 1)[0])
    else:
        gamma = float("inf")  # decays below floor before the fit window

    if vanish_fn is None:
        return float("nan"), gamma
    # alpha: slope of log|vanish_fn| on the rising flank above the floor
    t = np.geomspace(1e-4, 0.5, 1 << 12)
    v = np.abs(vanish_fn(t))
    vpeak = v.max()
    ok = v > max(floor * vpeak, 1e-13)
    if ok.sum() < 8:
        return float("inf"), gamma
    t_ok = t[ok]
    lo = t_ok[0]
    window = (t >= lo) & (t <= lo * 4) & ok
    alpha = float(np.polyfit(np.log(t[window]), np.log(v[window]), 1)[0])
    return alpha, gamma


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

@dataclass
class Generator:
    """A shearlet or scaling generator described in the frequency domain.

    `spectrum` evaluates the full d-dimensional spectrum; `factors`
    holds per-axis callables for separable kinds (`None` entries mean
    the axis is coupled, as for the classical wedge).  Spectra of real
    generators are conjugate symmetric, which downstream code relies on
    to produce real coefficients.
    """

    dim: int
    kind: str  # "compact-separable" | "band-limited-classical"
    role: str  # "shearlet" | "scaling"
    spectrum: Callable[..., np.ndarray]
    factors: tuple | None = None
    support_hint: tuple | None = None
    decay_params: tuple[float, float] = (float("nan"), float("nan"))
    pair: FilterPair | None = None
    meta: dict = field(default_factory=dict)

    @property
    def alpha(self) -> float:
        return self.decay_params[0]

    @property
    def gamma(self) -> float:
        return self.decay_params[1]

    def frame_grade(self) -> bool:
        """Decay strong enough for the 2D frame sufficient conditions."""
        a, g = self.decay_params
        return bool(a > g > 3) if np.isfinite(a) else bool(g > 3)

    def sparsity_grade(self) -> bool:
        a, g = self.decay_params
        need_a = 8.0 if self.dim == 3 else 5.0
        return bool(a > need_a and g >= 4.0)


def _compact_factors(pair: FilterPair):
    """(g1, g2) axis factors: g1(t) = H1(4t) phihat(t), g2(t) = phihat(2t)."""
    def phihat(t):
        return _scaling_complex(pair, t)

    def g1(t):
        return pair.h1_transfer(4.0 * np.asarray(t, dtype=float)) * phihat(t)

    def g2(t):
        return phihat(2.0 * np.asarray(t, dtype=float))

    return phihat, g1, g2


def _build_compact_tables(pair: FilterPair):
    phihat, g1, g2 = _compact_factors(pair)
    ext_phi = _effective_extent(phihat, 0.25, 1e-13)
    ext_g1 = _effective_extent(g1, 0.25, 1e-13)
    t_phi = _AxisTable(phihat, ext_phi)
    t_g1 = _AxisTable(g1, ext_g1)
    t_g2 = _AxisTable(g2, ext_phi / 2.0 + 0.1)
    return t_phi, t_g1, t_g2


_TABLE_CACHE: dict = {}


def _tables_for(pair: FilterPair):
    key = (pair.K, pair.L)
    if key not in _TABLE_CACHE:
        _TABLE_CACHE[key] = _build_compact_tables(pair)
    return _TABLE_CACHE[key]


def compact_shearlet_2d(pair: FilterPair) -> Generator:
    """Separable compactly supported 2D shearlet generator.

    Spectrum ``H1(4 xi1) phihat(xi1) phihat(2 xi2)``.  The modulated
    factor vanishes to high order at ``xi1 = 0`` (directional vanishing
    moments) while both scaling-product factors supply the polynomial
    frequency decay.
    """
    t_phi, t_g1, t_g2 = _tables_for(pair)

    def spectrum(xi1, xi2):
        return t_g1(xi1) * t_g2(xi2)

    def g1_direct(t):
        return pair.h1_transfer(4.0 * np.asarray(t, dtype=float)) * _scaling_complex(pair, t)

    alpha, _ = fit_decay_params(t_g1, vanish_fn=g1_direct)
    _, gamma1 = fit_decay_params(lambda t: _scaling_complex(pair, t))
    n1 = pair.n_taps - 1
    return Generator(
        dim=2, kind="compact-separable", role="shearlet",
        spectrum=spectrum, factors=(t_g1, t_g2),
        support_hint=((0.0, 6.0 * n1), (0.0, 4.0 * n1)),
        decay_params=(alpha, gamma1), pair=pair,
    )


def compact_scaling_2d(pair: FilterPair) -> Generator:
    """Tensor scaling generator ``phihat(xi1) phihat(xi2)``."""
    t_phi, _, _ = _tables_for(pair)

    def spectrum(xi1, xi2):
        return t_phi(xi1) * t_phi(xi2)

    _, gamma = fit_decay_params(lambda t: _scaling_complex(pair, t))
    n1 = pair.n_taps - 1
    return Generator(
        dim=2, kind="compact-separable", role="scaling",
        spectrum=spectrum, factors=(t_phi, t_phi),
        support_hint=((0.0, 2.0 * n1), (0.0, 2.0 * n1)),
        decay_params=(float("nan"), gamma), pair=pair,
    )


def compact_shearlets_3d(pair: FilterPair) -> tuple[Generator, Generator, Generator]:
    """Three separable 3D generators related by coordinate permutation.

    The base spectrum is ``eta(xi1) chi(xi2) chi(xi3)`` with
    ``eta(t) = H1(4t) phihat(t)`` and ``chi(t) = phihat(2t)``; the second
    and third generator move the oscillating factor to axes 2 and 3.
    """
    t_phi, t_g1, t_g2 = _tables_for(pair)

    def make(axis: int) -> Generator:
        def spectrum(xi1, xi2, xi3):
            parts = [xi1, xi2, xi3]
            out = t_g1(parts[axis])
            for i, p in enumerate(parts):
                if i != axis:
                    out = out * t_g2(p)
            return out

        def g1_direct(t):
            return pair.h1_transfer(4.0 * np.asarray(t, dtype=float)) * _scaling_complex(pair, t)

        alpha, _ = fit_decay_params(t_g1, vanish_fn=g1_direct)
        _, gamma = fit_decay_params(lambda t: _scaling_complex(pair, t))
        n1 = pair.n_taps - 1
        long_s = (0.0, 6.0 * n1)
        short_s = (0.0, 4.0 * n1)
        supp = tuple(long_s if i == axis else short_s for i in range(3))
        factors = tuple(t_g1 if i == axis else t_g2 for i in range(3))
        return Generator(
            dim=3, kind="compact-separable", role="shearlet",
            spectrum=spectrum, factors=factors, support_hint=supp,
            decay_params=(alpha, gamma), pair=pair,
            meta={"oscillating_axis": axis},
        )

    return make(0), make(1), make(2)


def compact_scaling_3d(pair: FilterPair) -> Generator:
    t_phi, _, _ = _tables_for(pair)

    def spectrum(xi1, xi2, xi3):
        return t_phi(xi1) * t_phi(xi2) * t_phi(xi3)

    _, gamma = fit_decay_params(lambda t: _scaling_complex(pair, t))
    n1 = pair.n_taps - 1
    supp = ((0.0, 2.0 * n1),) * 3
    return Generator(
        dim=3, kind="compact-separable", role="scaling",
        spectrum=spectrum, factors=(t_phi,) * 3, support_hint=supp,
        decay_params=(float("nan"), gamma), pair=pair,
    )


# ---------------------------------------------------------------------------
# classical band-limited construction
# ---------------------------------------------------------------------------

def meyer_ramp(t):
    """Polynomial ramp ``t^4 (35 - 84 t + 70 t^2 - 20 t^3)`` clamped to [0,1].

    C^3 at both ends and satisfies ramp(t) + ramp(1-t) = 1.
    """
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    return t ** 4 * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)))


def radial_window_sq(t):
    """Squared octave window: rises on [1/8,1/4], falls on [1/4,1/2].

    Dyadic dilates tile: ``sum_j w2(2^-j t) = 1`` for t != 0.  The
    support stays inside [-1/2, 1/2], so translating any derived band by
    a nonzero integer cannot overlap it (alias-free at unit sampling).
    """
    a = np.abs(np.asarray(t, dtype=float))
    rising = meyer_ramp(8.0 * a - 1.0)
    falling = 1.0 - meyer_ramp(4.0 * a - 1.0)
    out = np.where(a <= 0.25, rising, falling)
    return np.where((a <= 0.125) | (a >= 0.5), 0.0, out)


def bump_window(t):
    """Directional bump on [-1, 1]; unit-partition under integer shifts."""
    t = np.asarray(t, dtype=float)
    sq = meyer_ramp(1.0 - np.abs(t))
    return np.sqrt(np.clip(sq, 0.0, 1.0))


def scale_cover(t, j_max: int | None = None):
    """Partial dyadic tiling ``sum_{j=0}^{j_max-1} w2(2^-j t)``.

    Equals 0 for |t| <= 1/8, ramps to 1 at |t| = 1/4 and stays 1 until
    the truncation scale.  With ``j_max=None`` the value for |t| >= 1/4
    is exactly 1.
    """
    a = np.abs(np.asarray(t, dtype=float))
    if j_max is None:
        out = np.where(a >= 0.25, 1.0, meyer_ramp(8.0 * a - 1.0))
        return np.where(a <= 0.125, 0.0, out)
    out = np.zeros_like(a)
    for j in range(j_max):
        out = out + radial_window_sq(a * 2.0 ** (-j))
    return out


def classical_bandlimited_2d() -> tuple[Generator, Generator]:
    """Band-limited scaling/shearlet pair tiling the plane exactly.

    The shearlet spectrum is ``psi1(xi1) psi2(xi2/xi1)`` with the octave
    window as ``|psi1|`` and the directional bump as ``psi2``; the
    scaling spectrum fills ``1 - cover`` on the central square, split
    along the diagonal seam (the seam itself counts as horizontal).
    Everything is real and even, hence conjugate symmetric.
    """

    def psi_spectrum(xi1, xi2):
        xi1 = np.asarray(xi1, dtype=float)
        xi2 = np.asarray(xi2, dtype=float)
        w = np.sqrt(radial_window_sq(xi1))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(xi1 != 0.0, xi2 / np.where(xi1 == 0.0, 1.0, xi1), np.inf)
        return w * bump_window(np.where(np.isfinite(ratio), ratio, 2.0))

    def phi_spectrum(xi1, xi2):
        xi1 = np.asarray(xi1, dtype=float)
        xi2 = np.asarray(xi2, dtype=float)
        horiz = np.abs(xi2) <= np.abs(xi1)
        lam = np.where(horiz, scale_cover(xi1), scale_cover(xi2))
        return np.sqrt(np.clip(1.0 - lam, 0.0, 1.0))

    psi = Generator(
        dim=2, kind="band-limited-classical", role="shearlet",
        spectrum=psi_spectrum, factors=None, support_hint=None,
        decay_params=(float("inf"), float("inf")),
        meta={"band_support": (0.125, 0.5)},
    )
    phi = Generator(
        dim=2, kind="band-limited-classical", role="scaling",
        spectrum=phi_spectrum, factors=None, support_hint=None,
        decay_params=(float("nan"), float("inf")),
        meta={"band_support": (0.0, 0.25)},
    )
    return phi, psi

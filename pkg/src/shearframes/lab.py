"""Experiment harness: N-term rate curves, wavelet baseline, denoising.

Approximation errors are squared L2([0,1]^d) distances between the
phantom raster and its N-term reconstruction through the dual frame.
Rates are least-squares slopes on log-log data inside a fit window that
excludes both the constant-dominated head and the solver-noise tail.
The baseline transform is a periodic orthonormal tensor wavelet built
from the same spectral factory (a K = L filter pair is a standard
orthonormal family), so baseline N-term truncation is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .filters import spectral_factorize
from .systems import SystemSpec
from .transform import (
    analyze,
    synthesize,
    invert_frame,
    hard_threshold,
    image_norm,
    plan_for,
    n_largest,
)

__all__ = [
    "RateCurve",
    "fit_rate",
    "nterm_curve",
    "wavelet_baseline_curve",
    "denoise",
    "psnr",
    "dwt2",
    "idwt2",
    "dwt_nterm_error",
]


@dataclass
class RateCurve:
    Ns: tuple
    errors: tuple  # squared L2 errors
    fitted_slope: float
    fit_window: tuple
    r_squared: float
    label: str = ""
    meta: dict = field(default_factory=dict)

    def as_rows(self):
        return list(zip(self.Ns, self.errors))


def fit_rate(Ns, errors, window=None):
    """Least-squares slope of log(error) against log(N).

    `window` restricts the fit to ``window[0] <= N <= window[1]``.
    Returns (slope, r_squared).  Zero errors or a window with fewer
    than four points raise ValueError (degenerate fit).
    """
    Ns = np.asarray(Ns, dtype=float)
    errs = np.asarray(errors, dtype=float)
    if window is not None:
        keep = (Ns >= window[0]) & (Ns <= window[1])
        Ns, errs = Ns[keep], errs[keep]
    if len(Ns) < 4:
        raise ValueError("rate fit needs at least four points in the window")
    if np.any(errs <= 0):
        raise ValueError("errors must be positive for a log-log fit")
    x, y = np.log(Ns), np.log(errs)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(r2)


def nterm_curve(f, spec: SystemSpec, Ns, tol: float = 1e-6,
                max_iter: int = 200, fit_window=None, label="shearlet") -> RateCurve:
    """Squared-error curve of dual-frame N-term approximations.

    The analysis runs once; each N keeps the N largest coefficients and
    reconstructs through the inverse frame operator (CG, warm-started
    from the previous N).  Deterministic for fixed inputs.
    """
    fa = np.asarray(f, dtype=float)
    coeffs = analyze(fa, spec)
    flat = np.abs(coeffs.flatten())
    order = np.argsort(-flat, kind="stable")
    Ns = sorted(int(n) for n in Ns)
    if Ns[0] < 0 or Ns[-1] > len(flat):
        raise ValueError("N values outside the coefficient count")
    errors = []
    x_prev = None
    for N in Ns:
        keep = np.zeros(len(flat), dtype=bool)
        keep[order[:N]] = True
        kept = coeffs.copy()
        pos = 0
        for band in coeffs.plan.bands:
            v = kept.data[band]
            mask = keep[pos:pos + v.size].reshape(v.shape)
            kept.data[band] = np.where(mask, v, 0.0)
            pos += v.size
        y = synthesize(kept)
        x, _ = invert_frame(y, spec, tol=tol, max_iter=max_iter, x0=x_prev)
        x_prev = x
        errors.append(float(np.mean((fa - x) ** 2)))
    window = fit_window or (Ns[0], Ns[-1])
    slope, r2 = fit_rate(Ns, errors, window)
    return RateCurve(Ns=tuple(Ns), errors=tuple(errors), fitted_slope=slope,
                     fit_window=tuple(window), r_squared=r2, label=label,
                     meta={"tol": tol})


# ---------------------------------------------------------------------------
# orthonormal tensor wavelet baseline
# ---------------------------------------------------------------------------

def _daubechies_filters(order: int = 4):
    """Orthonormal low/high analysis pair from the spectral factory.

    A K = L pair satisfies the exact power-complementarity identity, so
    the sqrt(2)-renormalized taps form an orthonormal two-channel bank.
    """
    pair = spectral_factorize(order, order, relaxed=True)
    g = pair.h0 * math.sqrt(2.0)
    h = g[::-1].copy()
    h[1::2] *= -1.0  # quadrature mirror of the reversed low pass
    return g, h


def _dwt_axis(x: np.ndarray, g: np.ndarray, h: np.ndarray, axis: int):
    x = np.moveaxis(x, axis, -1)
    n = x.shape[-1]
    idx = (np.arange(n)[:, None] + np.arange(len(g))[None, :]) % n
    taps = x[..., idx]  # (..., n, L)
    lo = np.tensordot(taps, g, axes=([-1], [0]))[..., ::2]
    hi = np.tensordot(taps, h, axes=([-1], [0]))[..., ::2]
    return np.moveaxis(lo, -1, axis), np.moveaxis(hi, -1, axis)


def _idwt_axis(lo: np.ndarray, hi: np.ndarray, g: np.ndarray, h: np.ndarray,
               axis: int) -> np.ndarray:
    lo = np.moveaxis(lo, axis, -1)
    hi = np.moveaxis(hi, axis, -1)
    n = lo.shape[-1] * 2
    up_lo = np.zeros(lo.shape[:-1] + (n,))
    up_hi = np.zeros_like(up_lo)
    up_lo[..., ::2] = lo
    up_hi[..., ::2] = hi
    out = np.zeros_like(up_lo)
    # transpose of the periodic analysis convolution: the analysis reads
    # x[(2m + t) mod n], so sample p receives tap t from position p - t
    for t, (gv, hv) in enumerate(zip(g, h)):
        out += gv * np.roll(up_lo, t, axis=-1) + hv * np.roll(up_hi, t, axis=-1)
    return np.moveaxis(out, -1, axis)


def dwt2(x: np.ndarray, levels: int, order: int = 4) -> list:
    """Periodic orthonormal separable DWT (2D or 3D).

    Returns ``[approx, detail_level_1, ...]`` where each detail level is
    a dict keyed by the binary orientation tag ('01', '10', '11', ...).
    """
    g, h = _daubechies_filters(order)
    bands = []
    cur = np.asarray(x, dtype=float)
    for _ in range(levels):
        pieces = {"": cur}
        for ax in range(cur.ndim):
            nxt = {}
            for tag, arr in pieces.items():
                lo, hi = _dwt_axis(arr, g, h, ax)
                nxt[tag + "0"] = lo
                nxt[tag + "1"] = hi
            pieces = nxt
        cur = pieces.pop("0" * cur.ndim)
        bands.append(pieces)
    return [cur] + bands[::-1]


def idwt2(pyramid: list, order: int = 4) -> np.ndarray:
    g, h = _daubechies_filters(order)
    cur = pyramid[0]
    for level in pyramid[1:]:
        pieces = dict(level)
        pieces["0" * cur.ndim] = cur
        for ax in range(cur.ndim - 1, -1, -1):
            nxt = {}
            tags = {t[:-1] for t in pieces}
            for tag in tags:
                lo = pieces[tag + "0"]
                hi = pieces[tag + "1"]
                nxt[tag] = _idwt_axis(lo, hi, g, h, ax)
            pieces = nxt
        cur = pieces[""]
    return cur


def dwt_nterm_error(f: np.ndarray, N: int, levels: int, order: int = 4) -> float:
    """Squared error of keeping the N largest wavelet coefficients.

    Orthonormality makes the truncation error exactly the energy of the
    dropped coefficients, measured here in the image inner product.
    """
    pyr = dwt2(f, levels, order)
    flats = [pyr[0].ravel()] + [arr.ravel() for lev in pyr[1:]
                                for _, arr in sorted(lev.items())]
    allc = np.concatenate(flats)
    mags = np.abs(allc)
    order_idx = np.argsort(-mags, kind="stable")
    dropped = order_idx[N:]
    return float(np.sum(allc[dropped] ** 2)) / f.size


def wavelet_baseline_curve(f, Ns, order: int = 4, levels: int | None = None,
                           fit_window=None) -> RateCurve:
    fa = np.asarray(f, dtype=float)
    n_min = min(fa.shape)
    if levels is None:
        levels = max(1, int(math.log2(n_min)) - 3)
    Ns = sorted(int(n) for n in Ns)
    errors = [dwt_nterm_error(fa, N, levels, order) for N in Ns]
    window = fit_window or (Ns[0], Ns[-1])
    slope, r2 = fit_rate(Ns, errors, window)
    return RateCurve(Ns=tuple(Ns), errors=tuple(errors), fitted_slope=slope,
                     fit_window=tuple(window), r_squared=r2, label="wavelet",
                     meta={"order": order, "levels": levels})


# ---------------------------------------------------------------------------
# denoising
# ---------------------------------------------------------------------------

def psnr(reference: np.ndarray, candidate: np.ndarray, peak: float | None = None) -> float:
    ref = np.asarray(reference, dtype=float)
    mse = float(np.mean((ref - np.asarray(candidate, dtype=float)) ** 2))
    if peak is None:
        peak = float(ref.max() - ref.min())
    if mse == 0:
        return float("inf")
    return 10.0 * math.log10(peak ** 2 / mse)


def band_noise_gains(spec: SystemSpec, extents) -> dict:
    """Per-band coefficient std under unit-variance white pixel noise.

    Exact in the no-alias model: the coefficient against one frame
    element has variance ``sum |Psi_b|^2 / N^d``.
    """
    plan = plan_for(spec, extents)
    n_tot = float(np.prod(plan.extents))
    gains = {}
    for band in plan.bands:
        p = plan.multiplier(band)
        gains[band] = math.sqrt(float(np.vdot(p, p).real) / n_tot)
    return gains


def denoise(f_noisy, spec: SystemSpec, sigma: float, kappa: float = 1.0,
            tol: float = 1e-6, reference: np.ndarray | None = None):
    """Hard-threshold denoising through the frame.

    Thresholds are band-adaptive: ``kappa * sigma * gain_b * sqrt(2 log M)``
    with M the total coefficient count.  Returns the denoised raster and,
    when a clean reference is supplied, the PSNR before and after.
    """
    fa = np.asarray(f_noisy, dtype=float)
    coeffs = analyze(fa, spec)
    M = len(coeffs)
    gains = band_noise_gains(spec, fa.shape)
    base = kappa * sigma * math.sqrt(2.0 * math.log(M))
    kept = coeffs.map_bands(
        lambda band, v: np.where(np.abs(v) > base * gains[band], v, 0.0))
    y = synthesize(kept)
    x, _ = invert_frame(y, spec, tol=tol, max_iter=200)
    if reference is None:
        return x, float("nan"), float("nan")
    peak = float(np.asarray(reference).max() - np.asarray(reference).min())
    return x, psnr(reference, fa, peak), psnr(reference, x, peak)

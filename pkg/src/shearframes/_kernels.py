"""Hot loops for the digital band transforms.

A separable compact band acts on the frequency grid as

    P(n) = vec(n_long) * g2(b2(n_s1) + a2(n_long)) [* g3(...)]

where `vec` collects the scale normalization, density weight and the
long-axis factor, and each short axis samples a 1D table at sheared
positions.  The kernels below fuse the table lookups with the three
band operations (forward fold, adjoint scatter, diagonal accumulation)
so that no full-grid multiplier is ever materialized.  Work is
restricted to the long-frequency slab where `vec` is non-negligible.

Forward folding groups slab rows by their fold residue so the parallel
loop never races; adjoint and diagonal passes write disjoint rows by
construction.  Pure numpy fallbacks (slower, same arithmetic) keep the
package usable without numba.
"""

from __future__ import annotations

import numpy as np

try:
    import numba
    from numba import prange

    HAVE_NUMBA = True
except Exception:  # pragma: no cover - numba is an optional accelerator
    numba = None
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# reference (numpy) implementations
# ---------------------------------------------------------------------------

def _catrom_numpy(tab, t):
    return tab(t)


def _sheet(tab, a, b):
    return tab(b[None, :] + a[:, None])


def _block_2d(ev):
    return ev.vec[:, None] * _sheet(ev.tabs[0], ev.a[0], ev.b[0])


def _block_3d(ev):
    s2 = _sheet(ev.tabs[0], ev.a[0], ev.b[0])
    s3 = _sheet(ev.tabs[1], ev.a[1], ev.b[1])
    return (ev.vec[:, None] * s2)[:, :, None] * s3[:, None, :]


def forward_numpy(ev, F_moved, folded):
    block = _block_2d(ev) if F_moved.ndim == 2 else _block_3d(ev)
    G = F_moved[ev.slab] * np.conj(block)
    d = folded.shape
    for i, r in enumerate(ev.slab):
        tgt = folded[r % d[0]]
        g = G[i]
        if G.ndim == 2:
            for c in range(g.shape[0]):
                tgt[c % d[1]] += g[c]
        else:
            for c2 in range(g.shape[0]):
                for c3 in range(g.shape[1]):
                    tgt[c2 % d[1], c3 % d[2]] += g[c2, c3]


def adjoint_numpy(ev, Ctil, G_moved):
    block = _block_2d(ev) if G_moved.ndim == 2 else _block_3d(ev)
    d = Ctil.shape
    n_short = G_moved.shape[1:]
    if G_moved.ndim == 2:
        cols = np.arange(n_short[0]) % d[1]
        for i, r in enumerate(ev.slab):
            G_moved[r] += block[i] * Ctil[r % d[0]][cols]
    else:
        c2 = np.arange(n_short[0]) % d[1]
        c3 = np.arange(n_short[1]) % d[2]
        for i, r in enumerate(ev.slab):
            G_moved[r] += block[i] * Ctil[r % d[0]][np.ix_(c2, c3)]


def diag_numpy(ev, scale, diag_moved):
    block = _block_2d(ev) if diag_moved.ndim == 2 else _block_3d(ev)
    diag_moved[ev.slab] += scale * (block.real ** 2 + block.imag ** 2)


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(inline="always")
    def _catrom(values, step, n0, extent, t):
        if abs(t) > extent:
            return 0.0 + 0.0j
        x = t / step + n0
        i = int(np.floor(x))
        if i < 1:
            i = 1
        elif i > len(values) - 3:
            i = len(values) - 3
        s = x - i
        vm1 = values[i - 1]
        v0 = values[i]
        v1 = values[i + 1]
        v2 = values[i + 2]
        return v0 + 0.5 * s * (v1 - vm1 + s * (2 * vm1 - 5 * v0 + 4 * v1 - v2
                                               + s * (3 * (v0 - v1) + v2 - vm1)))

    @numba.njit(parallel=True, cache=True)
    def _forward_2d(F, axis, slab, order, starts, vec,
                    a2, b2, t2v, t2s, t2n, t2e, folded):
        d0, d1 = folded.shape
        n1 = len(b2)
        for fr in prange(d0):
            for pos in range(starts[fr], starts[fr + 1]):
                i = order[pos]
                r = slab[i]
                v = vec[i]
                off = a2[i]
                for c in range(n1):
                    val = v * _catrom(t2v, t2s, t2n, t2e, b2[c] + off)
                    g = F[r, c] if axis == 0 else F[c, r]
                    folded[fr, c % d1] += g * np.conj(val)

    @numba.njit(parallel=True, cache=True)
    def _adjoint_2d(G, axis, slab, vec, a2, b2, t2v, t2s, t2n, t2e, Ctil):
        d0, d1 = Ctil.shape
        n1 = len(b2)
        for i in prange(len(slab)):
            r = slab[i]
            v = vec[i]
            off = a2[i]
            row = Ctil[r % d0]
            for c in range(n1):
                val = v * _catrom(t2v, t2s, t2n, t2e, b2[c] + off)
                upd = val * row[c % d1]
                if axis == 0:
                    G[r, c] += upd
                else:
                    G[c, r] += upd

    @numba.njit(parallel=True, cache=True)
    def _diag_2d(diag, axis, slab, vec, a2, b2, t2v, t2s, t2n, t2e, scale):
        n1 = len(b2)
        for i in prange(len(slab)):
            r = slab[i]
            v = vec[i]
            off = a2[i]
            for c in range(n1):
                val = v * _catrom(t2v, t2s, t2n, t2e, b2[c] + off)
                p = scale * (val.real * val.real + val.imag * val.imag)
                if axis == 0:
                    diag[r, c] += p
                else:
                    diag[c, r] += p

    @numba.njit(parallel=True, cache=True)
    def _forward_3d(F, axis, slab, order, starts, vec,
                    a2, b2, t2v, t2s, t2n, t2e,
                    a3, b3, t3v, t3s, t3n, t3e, folded):
        d0, d1, d2 = folded.shape
        n1, n2 = len(b2), len(b3)
        for fr in prange(d0):
            row3l = np.empty(n2, dtype=np.complex128)
            for pos in range(starts[fr], starts[fr + 1]):
                i = order[pos]
                r = slab[i]
                v = vec[i]
                for c3 in range(n2):
                    row3l[c3] = _catrom(t3v, t3s, t3n, t3e, b3[c3] + a3[i])
                for c2 in range(n1):
                    val2 = v * _catrom(t2v, t2s, t2n, t2e, b2[c2] + a2[i])
                    f1 = c2 % d1
                    for c3 in range(n2):
                        val = val2 * row3l[c3]
                        if axis == 0:
                            g = F[r, c2, c3]
                        elif axis == 1:
                            g = F[c2, r, c3]
                        else:
                            g = F[c2, c3, r]
                        folded[fr, f1, c3 % d2] += g * np.conj(val)

    @numba.njit(parallel=True, cache=True)
    def _adjoint_3d(G, axis, slab, vec,
                    a2, b2, t2v, t2s, t2n, t2e,
                    a3, b3, t3v, t3s, t3n, t3e, Ctil):
        d0, d1, d2 = Ctil.shape
        n1, n2 = len(b2), len(b3)
        for i in prange(len(slab)):
            r = slab[i]
            v = vec[i]
            sheetC = Ctil[r % d0]
            row3 = np.empty(n2, dtype=np.complex128)
            for c3 in range(n2):
                row3[c3] = _catrom(t3v, t3s, t3n, t3e, b3[c3] + a3[i])
            for c2 in range(n1):
                val2 = v * _catrom(t2v, t2s, t2n, t2e, b2[c2] + a2[i])
                crow = sheetC[c2 % d1]
                for c3 in range(n2):
                    upd = val2 * row3[c3] * crow[c3 % d2]
                    if axis == 0:
                        G[r, c2, c3] += upd
                    elif axis == 1:
                        G[c2, r, c3] += upd
                    else:
                        G[c2, c3, r] += upd

    @numba.njit(parallel=True, cache=True)
    def _diag_3d(diag, axis, slab, vec,
                 a2, b2, t2v, t2s, t2n, t2e,
                 a3, b3, t3v, t3s, t3n, t3e, scale):
        n1, n2 = len(b2), len(b3)
        for i in prange(len(slab)):
            r = slab[i]
            v = vec[i]
            row3 = np.empty(n2, dtype=np.complex128)
            for c3 in range(n2):
                row3[c3] = _catrom(t3v, t3s, t3n, t3e, b3[c3] + a3[i])
            for c2 in range(n1):
                val2 = v * _catrom(t2v, t2s, t2n, t2e, b2[c2] + a2[i])
                for c3 in range(n2):
                    val = val2 * row3[c3]
                    p = scale * (val.real * val.real + val.imag * val.imag)
                    if axis == 0:
                        diag[r, c2, c3] += p
                    elif axis == 1:
                        diag[c2, r, c3] += p
                    else:
                        diag[c2, c3, r] += p


# ---------------------------------------------------------------------------
# dispatch layer
# ---------------------------------------------------------------------------

class BandEval:
    """Prepared per-band evaluation data for the fused kernels."""

    __slots__ = ("axis", "slab", "vec", "a", "b", "tabs", "order", "starts")

    def __init__(self, axis, slab, vec, a, b, tabs, d_long):
        self.axis = axis
        self.slab = np.ascontiguousarray(slab, dtype=np.int64)
        self.vec = np.ascontiguousarray(vec, dtype=np.complex128)
        self.a = [np.ascontiguousarray(x) for x in a]
        self.b = [np.ascontiguousarray(x) for x in b]
        self.tabs = tabs
        residue = self.slab % d_long
        self.order = np.argsort(residue, kind="stable").astype(np.int64)
        counts = np.bincount(residue, minlength=d_long)
        self.starts = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)

    def multiplier_block(self):
        if len(self.tabs) == 1:
            return _block_2d(self)
        return _block_3d(self)


def _tab_args(tab):
    return tab.values, tab.step, float(tab.n0), tab.extent


def band_forward(ev: BandEval, F: np.ndarray, counts_moved) -> np.ndarray:
    folded = np.zeros(counts_moved, dtype=np.complex128)
    if HAVE_NUMBA:
        if F.ndim == 2:
            _forward_2d(F, ev.axis, ev.slab, ev.order, ev.starts, ev.vec,
                        ev.a[0], ev.b[0], *_tab_args(ev.tabs[0]), folded)
        else:
            _forward_3d(F, ev.axis, ev.slab, ev.order, ev.starts, ev.vec,
                        ev.a[0], ev.b[0], *_tab_args(ev.tabs[0]),
                        ev.a[1], ev.b[1], *_tab_args(ev.tabs[1]), folded)
    else:
        F_moved = np.moveaxis(F, ev.axis, 0)
        forward_numpy(ev, F_moved, folded)
    return folded


def band_adjoint(ev: BandEval, Ctil: np.ndarray, G: np.ndarray) -> None:
    if HAVE_NUMBA:
        if G.ndim == 2:
            _adjoint_2d(G, ev.axis, ev.slab, ev.vec,
                        ev.a[0], ev.b[0], *_tab_args(ev.tabs[0]), Ctil)
        else:
            _adjoint_3d(G, ev.axis, ev.slab, ev.vec,
                        ev.a[0], ev.b[0], *_tab_args(ev.tabs[0]),
                        ev.a[1], ev.b[1], *_tab_args(ev.tabs[1]), Ctil)
    else:
        adjoint_numpy(ev, Ctil, np.moveaxis(G, ev.axis, 0))


def band_diag(ev: BandEval, scale: float, diag: np.ndarray) -> None:
    if HAVE_NUMBA:
        if diag.ndim == 2:
            _diag_2d(diag, ev.axis, ev.slab, ev.vec,
                     ev.a[0], ev.b[0], *_tab_args(ev.tabs[0]), scale)
        else:
            _diag_3d(diag, ev.axis, ev.slab, ev.vec,
                     ev.a[0], ev.b[0], *_tab_args(ev.tabs[0]),
                     ev.a[1], ev.b[1], *_tab_args(ev.tabs[1]), scale)
    else:
        diag_numpy(ev, scale, np.moveaxis(diag, ev.axis, 0))


if HAVE_NUMBA:

    @numba.njit(parallel=True, cache=True)
    def _theta_family_jit(out, xi_r, xi_c, u_scale, v_scale, k_lo, k_hi,
                          w1, w2, t1v, t1s, t1n, t1e, t2v, t2s, t2n, t2e):
        nr, nc = out.shape
        for r in prange(nr):
            u = u_scale * xi_r[r]
            g1a = _catrom(t1v, t1s, t1n, t1e, u)
            g1b = _catrom(t1v, t1s, t1n, t1e, u + w1)
            amp = abs(g1a) * abs(g1b)
            if amp < 1e-300:
                continue
            for k in range(k_lo, k_hi + 1):
                base = k * u
                for c in range(nc):
                    eta2 = base + v_scale * xi_c[c]
                    g2a = _catrom(t2v, t2s, t2n, t2e, eta2)
                    g2b = _catrom(t2v, t2s, t2n, t2e, eta2 + w2)
                    out[r, c] += amp * abs(g2a) * abs(g2b)


def theta_family_field(out, xi_rows, xi_cols, j, k_range, omega_row, omega_col,
                       tab_long, tab_short):
    """Accumulate one cone family's scale-j terms of the Theta sum.

    out[r, c] += sum_{|k|<=k_range} |g1(u) g1(u+w1)| |g2(k u + v) g2(k u + v + w2)|
    with u = 2^-j xi_rows[r], v = 2^(-j/2) xi_cols[c].
    """
    u_scale = 2.0 ** (-j)
    v_scale = 2.0 ** (-j / 2.0)
    if HAVE_NUMBA:
        _theta_family_jit(out, xi_rows, xi_cols, u_scale, v_scale,
                          -k_range, k_range, float(omega_row), float(omega_col),
                          *_tab_args(tab_long), *_tab_args(tab_short))
        return
    u = u_scale * xi_rows
    amp = np.abs(tab_long(u)) * np.abs(tab_long(u + omega_row))
    live = np.flatnonzero(amp > 1e-300)
    if len(live) == 0:
        return
    v = v_scale * xi_cols
    for k in range(-k_range, k_range + 1):
        eta2 = k * u[live][:, None] + v[None, :]
        out[live] += (amp[live][:, None] * np.abs(tab_short(eta2))
                      * np.abs(tab_short(eta2 + omega_col)))


__all__ = ["BandEval", "band_forward", "band_adjoint", "band_diag",
           "theta_family_field", "HAVE_NUMBA"]

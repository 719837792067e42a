"""FFT-based digital shearlet analysis, synthesis, and frame inversion.

Digital model
-------------
A raster samples ``[0,1)^d`` on a power-of-two grid; its DFT indices are
the integer frequencies of the periodized continuum model.  Every band
``(region, j, k)`` acts by multiplication with the sampled spectrum of
the dilated and sheared generator,

    ``Psi_b(n) = det(A_j)^(-1/2) psihat(S_-k^T A_{2^-j} n)``,

after which the band image is subsampled on the translation lattice of
the system.  Lattice spacings that are not an exact divisor of the
raster are snapped to the next power-of-two count; a density weight
(folded into the band multiplier) compensates, so that frame sums keep
the continuum normalization.  Subsampling in space is realised as
periodization ("folding") in frequency, which makes analysis and
synthesis exact adjoints of each other by construction.

Compact generators leak past the covered frequency set (deep notches at
purely dyadic columns and the Nyquist shell are reached by no admitted
scale).  A diagnostic-driven completion band fills those gaps so the
digital frame operator stays well conditioned; it can be disabled on
the system spec.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .systems import SystemSpec, digital_lattice_counts
from .filters import radial_window_sq, bump_window, scale_cover
from ._kernels import BandEval, band_forward, band_adjoint, band_diag

__all__ = [
    "Raster",
    "CoefficientSet",
    "TransformPlan",
    "ShapeError",
    "ConsistencyError",
    "IterativeSolverError",
    "plan_for",
    "analyze",
    "synthesize",
    "frame_operator",
    "invert_frame",
    "n_largest",
    "hard_threshold",
    "reconstruct_nterm",
    "image_inner",
    "image_norm",
]


class ShapeError(ValueError):
    """Raster shape incompatible with the system or plan."""


class ConsistencyError(ValueError):
    """Coefficient set does not match the system spec."""


class IterativeSolverError(RuntimeError):
    """CG did not reach the requested tolerance; carries the history."""

    def __init__(self, message, residuals):
        super().__init__(message)
        self.residuals = list(residuals)


@dataclass
class Raster:
    """Real samples of a function on the unit box.

    Extents must be powers of two and at least 8 (FFT path); `spacing`
    is the pixel size mapping indices to [0,1)^dim.
    """

    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        if self.data.ndim not in (2, 3):
            raise ShapeError("rasters are 2D or 3D")
        for n in self.data.shape:
            if n < 8 or (n & (n - 1)) != 0:
                raise ShapeError(f"extent {n} is not a power of two >= 8")
        if not np.all(np.isfinite(self.data)):
            raise ShapeError("raster data must be finite")

    @property
    def dim(self) -> int:
        return self.data.ndim

    @property
    def spacing(self) -> tuple:
        return tuple(1.0 / n for n in self.data.shape)


def _as_array(f) -> np.ndarray:
    if isinstance(f, Raster):
        return f.data
    arr = np.asarray(f, dtype=float)
    Raster(arr)  # reuse the invariant checks
    return arr


def image_inner(f, g) -> float:
    """L2([0,1]^d) inner product of two rasters (pixel quadrature)."""
    fa, ga = np.asarray(f, dtype=float), np.asarray(g, dtype=float)
    return float(np.vdot(fa, ga).real / fa.size)


def image_norm(f) -> float:
    return math.sqrt(max(image_inner(f, f), 0.0))


# ---------------------------------------------------------------------------
# band plans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Band:
    region: str
    j: int
    k: tuple
    counts: tuple   # coefficient extents per axis
    weight: float   # density compensation, folded into the multiplier


class TransformPlan:
    """Bands, multipliers and diagnostics for one (spec, extents) pair."""

    def __init__(self, spec: SystemSpec, extents: tuple):
        if len(extents) != spec.dim:
            raise ShapeError("raster dimension does not match the system")
        self.spec = spec
        self.extents = tuple(int(n) for n in extents)
        for n in self.extents:
            if n < 8 or (n & (n - 1)) != 0:
                raise ShapeError("extents must be powers of two >= 8")
        self.freqs = [np.fft.fftfreq(n, d=1.0 / n) for n in self.extents]
        self.bands: list[Band] = []
        c1, c2 = spec.c
        for region, j, k in spec.bands():
            counts = digital_lattice_counts(spec, region, j, self.extents)
            if region == "scaling":
                density = (1.0 / c1) ** spec.dim
            else:
                det_a = 2.0 ** (1.5 * j) if spec.dim == 2 else 2.0 ** (2 * j)
                density = det_a / (c1 * c2 ** (spec.dim - 1))
            weight = math.sqrt(density / float(np.prod(counts)))
            self.bands.append(Band(region, j, tuple(k), counts, weight))
        self._long_vec_cache: dict = {}
        self._eval_cache: dict = {}
        self._cache: dict | None = None
        cache_bytes = len(self.bands) * np.prod(self.extents) * 16
        if cache_bytes <= 2 ** 27:  # 128 MiB
            self._cache = {}
        self._diag: np.ndarray | None = None
        self._completion: np.ndarray | None = None
        if spec.completion:
            self._build_completion()

    # -- window evaluation ---------------------------------------------------

    def _band_eval(self, band: Band) -> BandEval | None:
        """Prepared kernel data for a separable band; None if it vanishes.

        The long-axis factor (scale normalization and density weight
        folded in) is restricted to the slab of frequencies where it is
        non-negligible; short axes are described by their sheared table
        arguments ``b[c] + a[row]``.
        """
        cached = self._eval_cache.get(band)
        if cached is not None or band in self._eval_cache:
            return cached
        spec = self.spec
        gen = spec.generators[band.region]
        axis = {"h": 0, "v": 1, "p1": 0, "p2": 1, "p3": 2}[band.region]
        j = band.j
        norm = 2.0 ** (-0.75 * j) if spec.dim == 2 else 2.0 ** (-j)
        key = (band.region, j)
        vec = self._long_vec_cache.get(key)
        if vec is None:
            g_long = gen.factors[0 if spec.dim == 2 else axis]
            vec = norm * g_long(self.freqs[axis] * 2.0 ** (-j))
            self._long_vec_cache[key] = vec
        peak = np.abs(vec).max()
        if peak <= 1e-300:
            self._eval_cache[band] = None
            return None
        slab = np.flatnonzero(np.abs(vec) > 1e-10 * peak)
        long_freq = self.freqs[axis][slab]
        off_axes = [i for i in range(spec.dim) if i != axis]
        tabs, a_rows, b_cols = [], [], []
        for t, i in enumerate(off_axes):
            tabs.append(gen.factors[1 if spec.dim == 2 else i])
            kk = band.k[t] if band.k else 0
            a_rows.append(-kk * 2.0 ** (-j) * long_freq)
            b_cols.append(2.0 ** (-j / 2.0) * self.freqs[i])
        ev = BandEval(axis, slab, band.weight * vec[slab], a_rows, b_cols,
                      tabs, band.counts[axis])
        self._eval_cache[band] = ev
        return ev

    def _separable_multiplier(self, band: Band) -> np.ndarray:
        """Full-grid multiplier of a separable band (diagnostics, oracle).

        Weighted like the kernel path, i.e. the density weight is
        already folded in.
        """
        out = np.zeros(self.extents, dtype=complex)
        ev = self._band_eval(band)
        if ev is not None:
            np.moveaxis(out, ev.axis, 0)[ev.slab] = ev.multiplier_block()
        return out

    def _is_separable(self, band: Band) -> bool:
        return (self.spec.kind == "compact-separable"
                and band.region not in ("scaling", "highpass"))

    def _moved_counts(self, band: Band, axis: int) -> tuple:
        others = tuple(c for i, c in enumerate(band.counts) if i != axis)
        return (band.counts[axis],) + others

    def _scaling_multiplier(self, band: Band) -> np.ndarray:
        spec = self.spec
        gen = spec.generators["scaling"]
        if gen.factors is not None:
            out = None
            for i in range(spec.dim):
                shape = [-1 if a == i else 1 for a in range(spec.dim)]
                part = gen.factors[i](self.freqs[i]).reshape(shape)
                out = part if out is None else out * part
            return out
        grids = np.meshgrid(*self.freqs, indexing="ij")
        return gen.spectrum(*grids).astype(complex)

    def _classical_multiplier(self, band: Band) -> np.ndarray:
        j, (k,) = band.j, band.k
        J = self.spec.J_max
        swap = band.region == "v"
        n1 = self.freqs[1 if swap else 0]
        n2 = self.freqs[0 if swap else 1]
        if j < J - 1:
            radial = np.sqrt(radial_window_sq(n1 * 2.0 ** (-j)))
        else:
            radial = np.sqrt(np.clip(scale_cover(n1) - scale_cover(n1, J - 1), 0.0, 1.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(n1 != 0.0, n2[None, :] / np.where(n1 == 0.0, 1.0, n1)[:, None], 0.0)
        shear = bump_window(k + 2.0 ** (j / 2.0) * ratio)
        if swap:
            cone = np.abs(n1)[:, None] > np.abs(n2)[None, :]
        else:
            cone = np.abs(n1)[:, None] >= np.abs(n2)[None, :]
        cone &= n1[:, None] != 0.0
        out = 2.0 ** (-0.75 * j) * radial[:, None] * shear * cone
        return (out.T if swap else out).astype(complex)

    def _nyquist_symmetrize(self, P: np.ndarray) -> np.ndarray:
        """Make the multiplier Hermitian on the shared Nyquist bins.

        The grid stores frequency -N/2 but not +N/2; a sampled continuum
        spectrum is therefore not conjugate symmetric on that row, which
        would leak coefficient energy into the discarded imaginary part.
        Replacing the row by the power average of itself and its mirror
        restores symmetry and leaves any pointwise squared-sum tiling of
        the bands unchanged.
        """
        for ax, n in enumerate(self.extents):
            idx = [slice(None)] * P.ndim
            idx[ax] = n // 2
            row = P[tuple(idx)]
            mirrored = row
            for other_ax in range(row.ndim):
                mirrored = np.roll(np.flip(mirrored, axis=other_ax), 1, axis=other_ax)
            P[tuple(idx)] = np.sqrt(0.5 * (np.abs(row) ** 2 + np.abs(mirrored) ** 2))
        return P

    def multiplier(self, band: Band) -> np.ndarray:
        """Weighted band multiplier on the full frequency grid.

        Separable compact bands are returned exactly as the fused
        kernels evaluate them (no Nyquist symmetrization); the full-grid
        bands are symmetrized so their coefficient fields stay real.
        """
        if self._cache is not None and band in self._cache:
            return self._cache[band]
        if band.region == "highpass":
            out = self._completion.astype(complex)
        elif band.region == "scaling":
            out = self._nyquist_symmetrize(band.weight * self._scaling_multiplier(band))
        elif self.spec.kind == "band-limited-classical":
            out = self._nyquist_symmetrize(band.weight * self._classical_multiplier(band))
        else:
            out = self._separable_multiplier(band)
        if self._cache is not None:
            self._cache[band] = out
        return out

    # -- completion and diagnostics -------------------------------------------

    def _shear_diag(self) -> np.ndarray:
        diag = np.zeros(self.extents)
        for band in self.bands:
            if band.region == "highpass":
                continue
            scale = float(np.prod(band.counts))
            if self._is_separable(band):
                ev = self._band_eval(band)
                if ev is not None:
                    band_diag(ev, scale, diag)
            else:
                p = self.multiplier(band)
                diag += scale * (p.real ** 2 + p.imag ** 2)
        return diag

    def _build_completion(self):
        diag = self._shear_diag()
        n_min = min(self.extents)
        sup = np.zeros(self.extents)
        for i, fr in enumerate(self.freqs):
            shape = [-1 if a == i else 1 for a in range(len(self.extents))]
            sup = np.maximum(sup, np.abs(fr).reshape(shape) * np.ones(self.extents))
        ring = sup >= n_min / 16.0
        ref = float(np.median(diag[ring])) if ring.any() else float(diag.max())
        if ref <= 0.0:
            ref = float(diag.max())
        level = 0.95 * ref
        fill = np.sqrt(np.clip(level - diag, 0.0, None) / float(np.prod(self.extents)))
        self._completion = fill
        self.bands.append(Band("highpass", 0, (), self.extents, 1.0))
        self._diag = diag + float(np.prod(self.extents)) * fill ** 2

    @property
    def frame_diagonal(self) -> np.ndarray:
        """No-alias diagonal of the frame operator in frequency."""
        if self._diag is None:
            self._diag = self._shear_diag()
        return self._diag

    # -- core linear maps ------------------------------------------------------

    def _fold(self, G: np.ndarray, counts: tuple) -> np.ndarray:
        out = G
        for ax, (n, d) in enumerate(zip(self.extents, counts)):
            if d == n:
                continue
            s = n // d
            shape = out.shape[:ax] + (s, d) + out.shape[ax + 1:]
            out = out.reshape(shape).sum(axis=ax)
        return out

    def _tile(self, C: np.ndarray, counts: tuple) -> np.ndarray:
        reps = tuple(n // d for n, d in zip(self.extents, counts))
        return np.tile(C, reps)

    def analyze_band(self, F: np.ndarray, band: Band) -> np.ndarray:
        scale = float(np.prod(band.counts)) / float(np.prod(self.extents))
        if self._is_separable(band):
            ev = self._band_eval(band)
            if ev is None:
                return np.zeros(band.counts)
            folded = band_forward(ev, F, self._moved_counts(band, ev.axis))
            coeffs = np.fft.ifftn(folded)
            return scale * np.moveaxis(coeffs, 0, ev.axis).real
        P = self.multiplier(band)
        folded = self._fold(F * np.conj(P), band.counts)
        return scale * np.fft.ifftn(folded).real

    def accumulate_band(self, G: np.ndarray, band: Band, coeffs: np.ndarray) -> None:
        if self._is_separable(band):
            ev = self._band_eval(band)
            if ev is None:
                return
            Ctil = np.fft.fftn(np.ascontiguousarray(np.moveaxis(coeffs, ev.axis, 0)))
            band_adjoint(ev, Ctil, G)
            return
        P = self.multiplier(band)
        G += P * self._tile(np.fft.fftn(coeffs), band.counts)


_PLAN_CACHE: dict = {}


def _spec_key(spec: SystemSpec):
    return (
        spec.dim, spec.J_max, spec.c, spec.kind, spec.completion,
        spec.domain_box, tuple(sorted(spec.params.items())),
    )


def plan_for(spec: SystemSpec, extents) -> TransformPlan:
    key = (_spec_key(spec), tuple(int(n) for n in extents))
    plan = _PLAN_CACHE.get(key)
    if plan is None:
        plan = TransformPlan(spec, tuple(extents))
        _PLAN_CACHE[key] = plan
    return plan


# ---------------------------------------------------------------------------
# coefficient container
# ---------------------------------------------------------------------------

class CoefficientSet:
    """Real coefficients per band, in the canonical band order.

    Dense storage: each band holds its full coefficient sub-raster on
    the digitized translation lattice; thresholding operations zero
    entries rather than delete them, and `nnz` reports the retained
    count of the sparse view.
    """

    def __init__(self, plan: TransformPlan, data: dict):
        self.plan = plan
        self.data = data
        self.truncated_request = False

    @classmethod
    def zeros(cls, plan: TransformPlan) -> "CoefficientSet":
        return cls(plan, {b: np.zeros(b.counts) for b in plan.bands})

    def copy(self) -> "CoefficientSet":
        return CoefficientSet(self.plan, {b: v.copy() for b, v in self.data.items()})

    @property
    def spec(self) -> SystemSpec:
        return self.plan.spec

    def __len__(self) -> int:
        return int(sum(v.size for v in self.data.values()))

    def nnz(self) -> int:
        return int(sum(np.count_nonzero(v) for v in self.data.values()))

    def norm2(self) -> float:
        """Frame-sum energy: plain sum of squared coefficients."""
        return float(sum(np.vdot(v, v).real for v in self.data.values()))

    def inner(self, other: "CoefficientSet") -> float:
        if other.plan is not self.plan and [b.region for b in other.plan.bands] != \
                [b.region for b in self.plan.bands]:
            raise ConsistencyError("coefficient sets from different plans")
        return float(sum(np.vdot(self.data[b], other.data[b]).real for b in self.plan.bands))

    def flatten(self) -> np.ndarray:
        return np.concatenate([self.data[b].ravel() for b in self.plan.bands])

    def map_bands(self, fn) -> "CoefficientSet":
        return CoefficientSet(self.plan, {b: fn(b, v) for b, v in self.data.items()})


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def analyze(f, spec: SystemSpec) -> CoefficientSet:
    """Shearlet analysis: inner products with every digital frame element."""
    fa = _as_array(f)
    if fa.ndim != spec.dim:
        raise ShapeError(f"{fa.ndim}D raster given to a {spec.dim}D system")
    plan = plan_for(spec, fa.shape)
    F = np.fft.fftn(fa)
    data = {b: plan.analyze_band(F, b) for b in plan.bands}
    return CoefficientSet(plan, data)


def synthesize(c: CoefficientSet, spec: SystemSpec | None = None) -> np.ndarray:
    """Adjoint of `analyze`: weighted sum of frame elements."""
    plan = c.plan
    if spec is not None and _spec_key(spec) != _spec_key(plan.spec):
        raise ConsistencyError("coefficient set was produced under a different spec")
    G = np.zeros(plan.extents, dtype=complex)
    for band in plan.bands:
        if band not in c.data:
            raise ConsistencyError(f"missing band {band}")
        plan.accumulate_band(G, band, c.data[band])
    return np.fft.ifftn(G).real * float(np.prod(plan.extents))


def frame_operator(f, spec: SystemSpec) -> np.ndarray:
    """Apply S = synthesize . analyze in one band sweep."""
    fa = _as_array(f)
    plan = plan_for(spec, fa.shape)
    F = np.fft.fftn(fa)
    G = np.zeros_like(F)
    for band in plan.bands:
        coeffs = plan.analyze_band(F, band)
        plan.accumulate_band(G, band, coeffs)
    return np.fft.ifftn(G).real * float(np.prod(plan.extents))


def invert_frame(y, spec: SystemSpec, tol: float = 1e-6,
                 max_iter: int = 200, x0: np.ndarray | None = None):
    """Solve S x = y by preconditioned conjugate gradients.

    The preconditioner divides by the no-alias frequency diagonal of S,
    which is exact for tight digital systems and captures everything
    except lattice aliasing otherwise.  Raises IterativeSolverError
    with the residual history when `max_iter` is hit first.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    ya = _as_array(y)
    plan = plan_for(spec, ya.shape)
    diag = plan.frame_diagonal
    floor = max(diag.max(), 1e-300) * 1e-12
    safe = np.maximum(diag, floor)

    def precond(r):
        return np.fft.ifftn(np.fft.fftn(r) / safe).real

    if x0 is None:
        x = np.zeros_like(ya)
        r = ya.copy()
    else:
        x = np.asarray(x0, dtype=float).copy()
        r = ya - frame_operator(x, spec)
    z = precond(r)
    p = z.copy()
    rz = float(np.vdot(r, z).real)
    ynorm = math.sqrt(float(np.vdot(ya, ya).real))
    if ynorm == 0.0:
        return np.zeros_like(ya), [0.0]
    history = [math.sqrt(float(np.vdot(r, r).real)) / ynorm]
    for _ in range(max_iter):
        if history[-1] <= tol:
            return x, history
        Sp = frame_operator(p, spec)
        alpha = rz / float(np.vdot(p, Sp).real)
        x = x + alpha * p
        r = r - alpha * Sp
        history.append(math.sqrt(float(np.vdot(r, r).real)) / ynorm)
        z = precond(r)
        rz_new = float(np.vdot(r, z).real)
        beta = rz_new / rz
        rz = rz_new
        p = z + beta * p
    if history[-1] <= tol:
        return x, history
    raise IterativeSolverError(
        f"no convergence to {tol:g} within {max_iter} iterations "
        f"(residual {history[-1]:.3e})", history)


def n_largest(c: CoefficientSet, N: int) -> CoefficientSet:
    """Keep exactly the N largest coefficients in magnitude.

    Ties resolve by the canonical flattening order, so the selection is
    deterministic.  Requests beyond the total size return everything
    (flagged on the result as ``truncated_request``).
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    total = len(c)
    out = c.copy()
    out.truncated_request = N > total
    if N >= total:
        return out
    flat = np.abs(c.flatten())
    # stable: among equal magnitudes the earlier canonical index wins
    order = np.argsort(-flat, kind="stable")
    keep = np.zeros(total, dtype=bool)
    keep[order[:N]] = True
    pos = 0
    for band in c.plan.bands:
        v = out.data[band]
        sz = v.size
        mask = keep[pos:pos + sz].reshape(v.shape)
        out.data[band] = np.where(mask, v, 0.0)
        pos += sz
    return out


def hard_threshold(c: CoefficientSet, tau) -> CoefficientSet:
    """Zero all coefficients with magnitude <= tau.

    `tau` may be a scalar or a per-band mapping ``(region, j) -> float``.
    """
    if np.isscalar(tau) and tau < 0:
        raise ValueError("tau must be >= 0")

    def cut(band, v):
        t = tau if np.isscalar(tau) else tau(band.region, band.j)
        return np.where(np.abs(v) > t, v, 0.0)

    return c.map_bands(cut)


def reconstruct_nterm(f, spec: SystemSpec, N: int, tol: float = 1e-6,
                      max_iter: int = 200, x0=None):
    """Best-N-term style reconstruction through the dual frame.

    Keeps the N largest analysis coefficients and maps them through the
    inverse frame operator, i.e. sums the corresponding dual elements.
    """
    coeffs = n_largest(analyze(f, spec), N)
    y = synthesize(coeffs)
    x, history = invert_frame(y, spec, tol=tol, max_iter=max_iter, x0=x0)
    return x, history

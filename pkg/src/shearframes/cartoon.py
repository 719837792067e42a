"""Cartoon-like test images with analytically known regularity.

A 2D phantom is a smooth part plus a second smooth function restricted
to a star-shaped set: the boundary radius is a trigonometric polynomial
with a curvature budget, and the smooth parts are polynomial bumps
normalized in the C^2 norm.  Every generated phantom re-validates its
own invariants through an independent checker before use.  3D phantoms
replace the star set by a perturbed sphere (one smooth piece) or a
superellipsoid "rounded cube" whose boundary splits into six smooth
face patches meeting along curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .transform import Raster

__all__ = [
    "PolyBump",
    "RadiusFunction",
    "CartoonSpec",
    "random_star_set",
    "rasterize_cartoon",
    "surface_cartoon_3d",
    "random_cartoon_2d",
]

# max of |d/dt (1-t^2)^3| over [0,1]: attained at t = 1/sqrt(5)
_BUMP_D1 = 96.0 / (25.0 * math.sqrt(5.0))
_BUMP_D2_DIAG = 6.0   # |d^2/dt^2| max (at the center)
_BUMP_D2_OFF = 3.0    # mixed second derivative max


@dataclass(frozen=True)
class PolyBump:
    """Radially symmetric polynomial bump ``A (1 - |x-x0|^2/r^2)^3``.

    The amplitude is chosen at construction so that the C^2 norm (sum of
    sup norms of all derivatives up to order two) stays below `c2_budget`.
    All derivative maxima are closed-form, so the bound is exact.
    """

    center: tuple
    radius: float
    c2_budget: float = 1.0
    sign: float = 1.0

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def amplitude(self) -> float:
        d = self.dim
        r = self.radius
        norm_factor = (1.0
                       + d * _BUMP_D1 / r
                       + d * _BUMP_D2_DIAG / r ** 2
                       + (d * (d - 1) / 2) * _BUMP_D2_OFF / r ** 2)
        return self.sign * self.c2_budget / norm_factor

    def __call__(self, *coords) -> np.ndarray:
        s = np.zeros_like(np.asarray(coords[0], dtype=float))
        for x, c in zip(coords, self.center):
            s = s + ((np.asarray(x, dtype=float) - c) / self.radius) ** 2
        return self.amplitude * np.clip(1.0 - s, 0.0, None) ** 3

    def c2_norm(self) -> float:
        d = self.dim
        r = self.radius
        a = abs(self.amplitude)
        return a * (1.0 + d * _BUMP_D1 / r + d * _BUMP_D2_DIAG / r ** 2
                    + (d * (d - 1) / 2) * _BUMP_D2_OFF / r ** 2)


@dataclass(frozen=True)
class RadiusFunction:
    """Star-set radius ``rho(theta) = rho0 + sum a_n cos + b_n sin``.

    `harmonics` holds (n, a_n, b_n) triples; an n = 0 entry acts as a
    constant offset, which is how random draws keep ``rho <= rho0``.
    """

    rho0: float
    harmonics: tuple = ()

    def rho(self, theta) -> np.ndarray:
        th = np.asarray(theta, dtype=float)
        out = np.full_like(th, self.rho0)
        for n, a, b in self.harmonics:
            out = out + a * np.cos(n * th) + b * np.sin(n * th)
        return out

    def rho_pp(self, theta) -> np.ndarray:
        """Second derivative, analytic from the trigonometric form."""
        th = np.asarray(theta, dtype=float)
        out = np.zeros_like(th)
        for n, a, b in self.harmonics:
            out = out - n * n * (a * np.cos(n * th) + b * np.sin(n * th))
        return out

    def validate(self, nu: float, n_grid: int = 4096) -> None:
        th = np.linspace(0.0, 2 * np.pi, n_grid, endpoint=False)
        r = self.rho(th)
        if not (r > 0).all():
            raise ValueError("radius function must stay positive")
        if (r > self.rho0 + 1e-12).any():
            raise ValueError("radius exceeds its cap rho0")
        if self.rho0 >= 1.0:
            raise ValueError("rho0 must be < 1")
        # margin for the grid: a degree-6 trig polynomial cannot peak
        # much between 4096 samples
        if np.abs(self.rho_pp(th)).max() > nu * (1 + 1e-9):
            raise ValueError("curvature budget exceeded")


@dataclass(frozen=True)
class CartoonSpec:
    """Analytic description of a cartoon phantom.

    2D: `boundary` is a RadiusFunction and membership is the polar
    inequality around `center`.  3D: `boundary` is a direction-dependent
    radius field (callable of unit vectors) with `pieces` smooth
    patches.
    """

    dim: int
    nu: float
    boundary: object
    bumps_smooth: tuple
    bumps_jump: tuple
    center: tuple
    pieces: int = 1
    meta: dict = field(default_factory=dict, compare=False)

    def inside(self, *coords) -> np.ndarray:
        rel = [np.asarray(x, dtype=float) - c for x, c in zip(coords, self.center)]
        r = np.sqrt(sum(v ** 2 for v in rel))
        if self.dim == 2:
            theta = np.arctan2(rel[1], rel[0])
            return r <= self.boundary.rho(theta)
        with np.errstate(invalid="ignore", divide="ignore"):
            u = [np.where(r > 0, v / np.where(r == 0, 1.0, r), 0.0) for v in rel]
        return r <= self.boundary(*u)

    def value(self, *coords) -> np.ndarray:
        out = np.zeros_like(np.asarray(coords[0], dtype=float))
        for bump in self.bumps_smooth:
            out = out + bump(*coords)
        jump = np.zeros_like(out)
        for bump in self.bumps_jump:
            jump = jump + bump(*coords)
        return out + jump * self.inside(*coords)

    def validate(self) -> None:
        if self.dim == 2:
            self.boundary.validate(self.nu)
            rho_max = self.boundary.rho(np.linspace(0, 2 * np.pi, 4096)).max()
        else:
            u = _sphere_directions(2048)
            rho_max = float(self.boundary(*u.T).max())
            curv = _max_principal_curvature(self.boundary, self.center, 2048)
            if curv > self.nu * (1 + 1e-6):
                raise ValueError(f"principal curvature {curv:.3f} exceeds nu")
        for i, c in enumerate(self.center):
            if c - rho_max < 0.0 or c + rho_max > 1.0:
                raise ValueError("jump set does not fit inside the unit box")
        for bump in (*self.bumps_smooth, *self.bumps_jump):
            if bump.c2_norm() > 1.0 + 1e-12:
                raise ValueError("bump exceeds the unit C^2 budget")


# ---------------------------------------------------------------------------
# 2D construction
# ---------------------------------------------------------------------------

def random_star_set(nu: float, seed: int, rho0: float = 0.4,
                    max_degree: int = 6) -> RadiusFunction:
    """Seeded star-shaped boundary with curvature budget `nu`.

    Harmonics up to `max_degree` are drawn, then scaled so the grid
    check gives ``sup |rho''| <= 0.9 nu``; a constant offset keeps
    ``rho <= rho0``.  The construction is deterministic per seed and
    always succeeds (scaling toward zero recovers the circle).
    """
    if nu <= 0:
        raise ValueError("nu must be positive")
    rng = np.random.default_rng(seed)
    coeffs = []
    for n in range(1, max_degree + 1):
        a, b = rng.standard_normal(2) / (1.0 + n * n / 4.0)
        coeffs.append((n, a, b))
    th = np.linspace(0.0, 2 * np.pi, 4096, endpoint=False)
    pert = np.zeros_like(th)
    pert_pp = np.zeros_like(th)
    for n, a, b in coeffs:
        wave = a * np.cos(n * th) + b * np.sin(n * th)
        pert += wave
        pert_pp += -n * n * wave
    m_val = float(np.abs(pert).max())
    m_pp = float(np.abs(pert_pp).max())
    scale = min(0.9 * nu / m_pp if m_pp > 0 else np.inf,
                0.25 * rho0 / m_val if m_val > 0 else np.inf,
                0.2 * rho0)
    offset = scale * float(pert.max())
    harmonics = (((0, -offset, 0.0),)
                 + tuple((n, scale * a, scale * b) for n, a, b in coeffs))
    out = RadiusFunction(rho0=rho0, harmonics=harmonics)
    out.validate(nu)
    return out


def random_cartoon_2d(nu: float, seed: int, smooth_budget: float = 0.05) -> CartoonSpec:
    """Seeded 2D phantom: star jump set plus smooth and jump bumps.

    The jump part carries the full unit C^2 budget while the smooth
    background stays small, so approximation errors are dominated by the
    discontinuity rather than by re-synthesizing a large smooth bulk.
    Both parts are admissible members of the model class.
    """
    rng = np.random.default_rng(seed + 7777)
    boundary = random_star_set(nu, seed)
    smooth = PolyBump(center=(0.35 + 0.3 * rng.random(), 0.35 + 0.3 * rng.random()),
                      radius=0.32 + 0.05 * rng.random(), c2_budget=smooth_budget)
    jump = PolyBump(center=(0.5, 0.5), radius=0.55, c2_budget=1.0)
    spec = CartoonSpec(
        dim=2, nu=nu, boundary=boundary,
        bumps_smooth=(smooth,), bumps_jump=(jump,),
        center=(0.5, 0.5), pieces=1,
        meta={"seed": seed},
    )
    spec.validate()
    return spec


def rasterize_cartoon(spec: CartoonSpec, extents, supersample: int = 4):
    """Anti-aliased raster plus the exact analytic reference.

    Every pixel averages `supersample` points per axis, which turns the
    jump indicator into an area fraction; smooth parts are averaged the
    same way.  Returns ``(Raster, callable)``; the callable evaluates
    the exact phantom at arbitrary points for sub-pixel tests.
    """
    extents = tuple(int(n) for n in extents)
    if len(extents) != spec.dim:
        raise ValueError("extents dimension mismatch")
    S = int(supersample)
    if S < 1:
        raise ValueError("supersample must be >= 1")
    offsets = (np.arange(S) + 0.5) / S
    axes = []
    for n in extents:
        base = np.arange(n)[:, None]
        axes.append(((base + offsets[None, :]) / n))  # (n, S)
    out = np.zeros(extents)
    if spec.dim == 2:
        x1 = axes[0].reshape(-1, 1)
        x2 = axes[1].reshape(1, -1)
        vals = spec.value(np.broadcast_to(x1, (extents[0] * S, extents[1] * S)),
                          np.broadcast_to(x2, (extents[0] * S, extents[1] * S)))
        out = vals.reshape(extents[0], S, extents[1], S).mean(axis=(1, 3))
    else:
        x1 = axes[0].reshape(-1, 1, 1)
        for i0 in range(extents[0]):  # chunk along the first axis
            xx1 = np.broadcast_to(axes[0][i0].reshape(-1, 1, 1),
                                  (S, extents[1] * S, extents[2] * S))
            xx2 = np.broadcast_to(axes[1].reshape(1, -1, 1),
                                  (S, extents[1] * S, extents[2] * S))
            xx3 = np.broadcast_to(axes[2].reshape(1, 1, -1),
                                  (S, extents[1] * S, extents[2] * S))
            vals = spec.value(xx1, xx2, xx3)
            out[i0] = vals.reshape(S, extents[1], S, extents[2], S).mean(axis=(0, 2, 4))
    return Raster(out), spec.value


# ---------------------------------------------------------------------------
# 3D construction
# ---------------------------------------------------------------------------

def _sphere_directions(n: int) -> np.ndarray:
    """Deterministic quasi-uniform unit directions (Fibonacci spiral)."""
    i = np.arange(n, dtype=float) + 0.5
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def _max_principal_curvature(radius_field, center, n_dirs: int = 2048,
                             h: float = 1e-4) -> float:
    """Grid check of the largest |principal curvature| of a radial surface.

    Uses the level function ``F(x) = |x - y| - rho(dir(x - y))`` and the
    projected Hessian; the surface points come directly from the radius
    field, so no root finding is involved.
    """
    dirs = _sphere_directions(n_dirs)
    rho = radius_field(*dirs.T)
    pts = np.asarray(center)[None, :] + rho[:, None] * dirs

    def F(x):
        rel = x - np.asarray(center)[None, :]
        r = np.linalg.norm(rel, axis=1)
        u = rel / r[:, None]
        return r - radius_field(*u.T)

    worst = 0.0
    eye = np.eye(3)
    for p in pts[:: max(1, len(pts) // 1024)]:
        grad = np.zeros(3)
        hess = np.zeros((3, 3))
        base = p[None, :]
        for a in range(3):
            grad[a] = (F(base + h * eye[a]) - F(base - h * eye[a]))[0] / (2 * h)
            hess[a, a] = (F(base + h * eye[a]) - 2 * F(base)
                          + F(base - h * eye[a]))[0] / h ** 2
        for a in range(3):
            for b in range(a + 1, 3):
                va = (F(base + h * (eye[a] + eye[b]))
                      - F(base + h * (eye[a] - eye[b]))
                      - F(base + h * (eye[b] - eye[a]))
                      + F(base - h * (eye[a] + eye[b])))[0] / (4 * h ** 2)
                hess[a, b] = hess[b, a] = va
        g = np.linalg.norm(grad)
        n_hat = grad / g
        P = eye - np.outer(n_hat, n_hat)
        shape_op = P @ hess @ P / g
        eigs = np.linalg.eigvalsh(shape_op)
        worst = max(worst, float(np.abs(eigs).max()))
    return worst


def surface_cartoon_3d(nu: float, L_pieces: int, seed: int) -> CartoonSpec:
    """Seeded 3D phantom with a smooth or piecewise-smooth jump surface.

    ``L_pieces == 1`` gives a perturbed sphere; larger values give a
    rounded cube (superellipsoid) whose boundary decomposes into six
    smooth face patches meeting along curves.  The perturbation is
    halved until the grid-checked principal curvatures fit the budget,
    which always terminates (the unperturbed shapes satisfy it).
    """
    if L_pieces < 1:
        raise ValueError("L_pieces must be >= 1")
    if nu < 4.0:
        raise ValueError("curvature budget below the base-shape curvature")
    rng = np.random.default_rng(seed)
    r0 = 0.34

    if L_pieces == 1:
        w = rng.standard_normal(6) / 6.0

        def make_field(eps):
            def field(u1, u2, u3):
                p = (w[0] * u1 * u2 + w[1] * u2 * u3 + w[2] * u1 * u3
                     + w[3] * (u1 ** 2 - u3 ** 2) + w[4] * (u2 ** 2 - u3 ** 2)
                     + w[5] * u1 * u2 * u3)
                return r0 * (1.0 + eps * p)
            return field

        eps = 0.5
        pieces = 1
    else:
        p_exp = 2  # superellipsoid exponent 2p = 4

        def make_field(eps):
            def field(u1, u2, u3):
                # radius of {sum |x_i/a|^{2p} = 1} along direction u
                s = (np.asarray(u1) ** (2 * p_exp) + np.asarray(u2) ** (2 * p_exp)
                     + np.asarray(u3) ** (2 * p_exp))
                base = 1.0 / s ** (1.0 / (2 * p_exp))
                return r0 * (1.0 - eps + eps * base)
            return field

        eps = 1.0
        pieces = 6

    center = (0.5, 0.5, 0.5)
    for _ in range(20):
        f = make_field(eps)
        curv = _max_principal_curvature(f, center)
        if curv <= 0.9 * nu:
            break
        eps *= 0.5
    else:
        f = make_field(0.0)

    jump = PolyBump(center=center, radius=0.6, c2_budget=1.0)
    smooth = PolyBump(center=(0.45, 0.55, 0.5), radius=0.4, c2_budget=1.0)
    spec = CartoonSpec(
        dim=3, nu=nu, boundary=f,
        bumps_smooth=(smooth,), bumps_jump=(jump,),
        center=center, pieces=pieces,
        meta={"seed": seed, "eps": eps},
    )
    spec.validate()
    return spec

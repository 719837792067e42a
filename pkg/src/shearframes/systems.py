"""Index geometry for cone-adapted (2D) and pyramid-adapted (3D) systems.

Scaling, shear and translation-lattice matrices, the frequency-plane
region partition, and deterministic enumeration of the full index set of
a system specification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .filters import (
    FilterPair,
    Generator,
    classical_bandlimited_2d,
    compact_scaling_2d,
    compact_scaling_3d,
    compact_shearlet_2d,
    compact_shearlets_3d,
    spectral_factorize,
)

__all__ = [
    "ShearletIndex",
    "SystemSpec",
    "scaling_matrix",
    "shear_matrix",
    "translation_matrix",
    "shear_range",
    "enumerate_indices",
    "frequency_region",
    "lattice_counts",
    "digital_lattice_counts",
    "make_compact_system",
    "make_classical_system",
]

# region labels, in enumeration order; the cone pair C1 u C3 is "h",
# C2 u C4 is "v"; 3D pyramid pairs are "p1", "p2", "p3".
REGIONS_2D = ("scaling", "h", "v")
REGIONS_3D = ("scaling", "p1", "p2", "p3")


@dataclass(frozen=True, order=True)
class ShearletIndex:
    region: str
    j: int
    k: tuple  # () for scaling, (k,) in 2D, (k1, k2) in 3D
    m: tuple

    def __post_init__(self):
        if self.region == "scaling" and (self.j != 0 or any(self.k)):
            raise ValueError("scaling indices carry j = 0 and k = 0")
        if self.j < 0:
            raise ValueError("scale must be non-negative")
        r = shear_range(self.j)
        if any(abs(kk) > r for kk in self.k):
            raise ValueError(f"|k| > ceil(2^(j/2)) = {r} at j = {self.j}")


def scaling_matrix(dim: int, variant: str, j: int) -> np.ndarray:
    """Paraboloidal scaling matrix for scale j.

    2D variants "A" = diag(2^j, 2^(j/2)) and "At" (swapped); 3D variants
    "A", "At", "Ab" put the full power 2^j on axis 1, 2, 3 respectively.
    """
    if j < 0:
        raise ValueError("j must be >= 0")
    full, half = 2.0 ** j, 2.0 ** (j / 2.0)
    if dim == 2:
        if variant == "A":
            return np.diag([full, half])
        if variant == "At":
            return np.diag([half, full])
    elif dim == 3:
        if variant == "A":
            return np.diag([full, half, half])
        if variant == "At":
            return np.diag([half, full, half])
        if variant == "Ab":
            return np.diag([half, half, full])
    raise ValueError(f"unknown scaling variant {variant!r} for dim {dim}")


def shear_matrix(dim: int, variant: str, k) -> np.ndarray:
    """Unit-determinant integer shear matrix.

    In 2D, "S" is upper triangular and "St" lower triangular.  In 3D the
    pair k = (k1, k2) sits in the row of the distinguished axis.
    """
    if dim == 2:
        (kk,) = (k,) if np.isscalar(k) else tuple(k)
        if variant == "S":
            return np.array([[1, kk], [0, 1]], dtype=np.int64)
        if variant == "St":
            return np.array([[1, 0], [kk, 1]], dtype=np.int64)
    elif dim == 3:
        k1, k2 = k
        eye = np.eye(3, dtype=np.int64)
        if variant == "S":
            eye[0, 1], eye[0, 2] = k1, k2
            return eye
        if variant == "St":
            eye[1, 0], eye[1, 2] = k1, k2
            return eye
        if variant == "Sb":
            eye[2, 0], eye[2, 1] = k1, k2
            return eye
    raise ValueError(f"unknown shear variant {variant!r} for dim {dim}")


def translation_matrix(dim: int, region: str, c) -> np.ndarray:
    """Diagonal lattice matrix; the dense constant sits on the long axis."""
    c1, c2 = float(c[0]), float(c[1])
    if dim == 2:
        if region == "scaling":
            return np.diag([c1, c1])
        if region == "h":
            return np.diag([c1, c2])
        if region == "v":
            return np.diag([c2, c1])
    elif dim == 3:
        if region == "scaling":
            return np.diag([c1, c1, c1])
        if region == "p1":
            return np.diag([c1, c2, c2])
        if region == "p2":
            return np.diag([c2, c1, c2])
        if region == "p3":
            return np.diag([c2, c2, c1])
    raise ValueError(f"unknown region {region!r} for dim {dim}")


def shear_range(j: int) -> int:
    """ceil(2^(j/2)): the shear parameter runs over [-range, range]."""
    if j < 0:
        raise ValueError("j must be >= 0")
    if j % 2 == 0:
        return 2 ** (j // 2)
    return math.ceil(2.0 ** (j / 2.0))


def region_variants(dim: int, region: str) -> tuple[str, str]:
    """(scaling variant, shear variant) used by a cone/pyramid family."""
    table = {
        (2, "h"): ("A", "S"),
        (2, "v"): ("At", "St"),
        (3, "p1"): ("A", "S"),
        (3, "p2"): ("At", "St"),
        (3, "p3"): ("Ab", "Sb"),
    }
    return table[(dim, region)]


def _pow2ceil(x: float) -> int:
    """Smallest power of two >= x (x > 0), robust at exact powers."""
    if x <= 1.0:
        return 1
    return 1 << max(0, math.ceil(math.log2(x) - 1e-9))


def lattice_counts(dim: int, region: str, j: int, c) -> tuple[int, ...]:
    """Per-axis translation counts of the digitized lattice on [0,1)^dim.

    The continuum lattice for a family with scaling A and lattice M_c
    has per-axis spacings given by ``diag(A^-1 M_c)``; counts are the
    reciprocals rounded up to powers of two so that they embed exactly
    in any power-of-two raster.
    """
    c1, c2 = float(c[0]), float(c[1])
    if region == "scaling":
        return (_pow2ceil(1.0 / c1),) * dim
    full = 2.0 ** j / c1
    half = 2.0 ** (j / 2.0) / c2
    if dim == 2:
        counts = {"h": (full, half), "v": (half, full)}[region]
    else:
        counts = {
            "p1": (full, half, half),
            "p2": (half, full, half),
            "p3": (half, half, full),
        }[region]
    return tuple(_pow2ceil(x) for x in counts)


def digital_lattice_counts(spec: "SystemSpec", region: str, j: int,
                           extents) -> tuple[int, ...]:
    """Translation counts actually used by the digital transform.

    These are the continuum counts capped at the raster extents, with
    one exception: the finest classical scale carries the radial
    completion window, whose support reaches the Nyquist shell, so its
    lattice is densified (full count along the long axis, the sheared
    cross-section bound along the short axes) to keep the band decimation
    alias free.
    """
    counts = lattice_counts(spec.dim, region, j, spec.c)
    counts = tuple(min(cnt, ext) for cnt, ext in zip(counts, extents))
    if (spec.kind == "band-limited-classical" and region != "scaling"
            and j == spec.J_max - 1):
        # the radially completed top scale reaches the Nyquist shell,
        # where the grid identifies +N/2 with -N/2; leaving it
        # undecimated keeps the band exactly alias free
        counts = tuple(extents)
    return counts


@dataclass(frozen=True)
class SystemSpec:
    """Geometry and generators of a discrete shearlet system.

    `generators` maps the region families to Generator objects: key
    "scaling" plus one shearlet generator per cone/pyramid pair.  The
    spec is immutable; enumeration order and the digital lattice layout
    are functions of its fields only.
    """

    dim: int
    J_max: int
    c: tuple[float, float]
    domain_box: tuple = ((0.0, 1.0), (0.0, 1.0))
    generators: dict = field(default_factory=dict, compare=False, hash=False)
    kind: str = "compact-separable"
    completion: bool = True  # add a digital high-frequency completion band
    params: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        if self.J_max < 1:
            raise ValueError("J_max must be >= 1")
        c1, c2 = self.c
        if c1 <= 0 or c2 <= 0:
            raise ValueError("sampling constants must be positive")
        if self.kind == "compact-separable" and c2 > c1 + 1e-12:
            raise ValueError("compact systems require c2 <= c1")

    @property
    def regions(self) -> tuple[str, ...]:
        return REGIONS_2D if self.dim == 2 else REGIONS_3D

    def shear_families(self) -> tuple[str, ...]:
        return self.regions[1:]

    def shear_keys(self, j: int) -> list[tuple]:
        """Ordered shear tuples at scale j (lexicographic)."""
        r = shear_range(j)
        rng = range(-r, r + 1)
        if self.dim == 2:
            return [(k,) for k in rng]
        return [(k1, k2) for k1 in rng for k2 in rng]

    def bands(self) -> list[tuple[str, int, tuple]]:
        """All (region, j, k) bands in canonical order."""
        out = [("scaling", 0, (0,) * (self.dim - 1))]
        for region in self.shear_families():
            for j in range(self.J_max):
                for k in self.shear_keys(j):
                    out.append((region, j, k))
        return out

    def to_config(self) -> str:
        lines = [
            f"dim={self.dim}",
            f"J_max={self.J_max}",
            f"c1={self.c[0]:.17e}",
            f"c2={self.c[1]:.17e}",
            f"kind={self.kind}",
            f"completion={int(self.completion)}",
        ]
        for key in ("K", "L"):
            if key in self.params:
                lines.append(f"{key}={self.params[key]}")
        dom = ";".join(f"{a:.17e},{b:.17e}" for a, b in self.domain_box)
        lines.append(f"domain={dom}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_config(text: str) -> "SystemSpec":
        kv = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            kv[key.strip()] = val.strip()
        dim = int(kv["dim"])
        c = (float(kv["c1"]), float(kv["c2"]))
        kind = kv.get("kind", "compact-separable")
        dom = kv.get("domain")
        if dom:
            box = tuple(tuple(float(x) for x in part.split(",")) for part in dom.split(";"))
        else:
            box = tuple(((0.0, 1.0),) * dim)
        completion = bool(int(kv.get("completion", "1")))
        if kind == "band-limited-classical":
            return make_classical_system(J_max=int(kv["J_max"]), c=c, domain_box=box)
        return make_compact_system(
            dim=dim, K=int(kv["K"]), L=int(kv["L"]), J_max=int(kv["J_max"]),
            c=c, domain_box=box, completion=completion,
        )


def default_J_max(extent: int, kind: str = "compact-separable") -> int:
    """Scale count matched to a raster extent.

    The compact generator's strong frequency band sits two to three
    octaves below its nominal dyadic scale (the oscillating factor is
    modulated to a quarter of the sampling rate), so compact systems run
    scales to ``log2(N) + 2`` for the finest effective octave to reach
    the Nyquist shell.  Classical windows live at their native octaves
    and complete themselves radially at the top scale.
    """
    n = int(math.log2(extent))
    if kind == "band-limited-classical":
        return max(2, n)
    return n + 2


def make_compact_system(dim: int = 2, K: int = 15, L: int = 10,
                        J_max: int = 6, c=(0.5, 0.5), domain_box=None,
                        completion: bool = True, relaxed: bool = False) -> SystemSpec:
    """Assemble a compactly supported system spec for the given filter."""
    pair = spectral_factorize(K, L, relaxed=relaxed)
    if dim == 2:
        gens = {
            "scaling": compact_scaling_2d(pair),
            "h": compact_shearlet_2d(pair),
        }
        gens["v"] = gens["h"]  # the v family evaluates with swapped axes
    else:
        psi1, psi2, psi3 = compact_shearlets_3d(pair)
        gens = {
            "scaling": compact_scaling_3d(pair),
            "p1": psi1, "p2": psi2, "p3": psi3,
        }
    box = domain_box or tuple(((0.0, 1.0),) * dim)
    return SystemSpec(
        dim=dim, J_max=J_max, c=(float(c[0]), float(c[1])), domain_box=box,
        generators=gens, kind="compact-separable", completion=completion,
        params={"K": K, "L": L},
    )


def make_classical_system(J_max: int = 4, c=(1.0, 1.0), domain_box=None) -> SystemSpec:
    phi, psi = classical_bandlimited_2d()
    box = domain_box or ((0.0, 1.0), (0.0, 1.0))
    return SystemSpec(
        dim=2, J_max=J_max, c=(float(c[0]), float(c[1])), domain_box=box,
        generators={"scaling": phi, "h": psi, "v": psi},
        kind="band-limited-classical", completion=False,
    )


def _support_box(spec: SystemSpec, region: str, j: int, k) -> np.ndarray | None:
    """Spatial support box of one element, as dim x 2 array, or None."""
    gen = spec.generators.get(region if region != "scaling" else "scaling")
    if gen is None or gen.support_hint is None:
        return None
    base = np.asarray(gen.support_hint, dtype=float)
    if region == "v" and spec.dim == 2:
        base = base[::-1]
    corners = []
    for idx in range(1 << spec.dim):
        pt = [base[a][(idx >> a) & 1] for a in range(spec.dim)]
        corners.append(pt)
    corners = np.asarray(corners).T
    if region != "scaling":
        var_a, var_s = region_variants(spec.dim, region)
        A = scaling_matrix(spec.dim, var_a, j)
        S = shear_matrix(spec.dim, var_s, k[0] if spec.dim == 2 else k)
        corners = np.linalg.solve(S @ A, corners)
    return np.stack([corners.min(axis=1), corners.max(axis=1)], axis=1)


def enumerate_indices(spec: SystemSpec, periodic: bool = True,
                      raster_extents=None) -> Iterator[ShearletIndex]:
    """Deterministic enumeration of the full index set.

    With ``periodic=True`` (the digital convention) translations are the
    points of the digitized lattice wrapped onto the domain box, i.e.
    ``m`` runs over the per-axis counts from `lattice_counts`.  With
    ``periodic=False`` translations are the continuum lattice points
    whose element support box intersects the domain box.

    Order: region, then j, then k lexicographic, then m lexicographic.
    """
    for region, j, k in spec.bands():
        if periodic:
            if raster_extents is not None:
                counts = digital_lattice_counts(spec, region, j, raster_extents)
            else:
                counts = lattice_counts(spec.dim, region, j, spec.c)
            for m in np.ndindex(*counts):
                yield ShearletIndex(region=region, j=j, k=tuple(k), m=tuple(int(x) for x in m))
        else:
            box = _support_box(spec, region, j, k)
            M = translation_matrix(spec.dim, region, spec.c)
            if region != "scaling":
                var_a, var_s = region_variants(spec.dim, region)
                A = scaling_matrix(spec.dim, var_a, j)
                S = shear_matrix(spec.dim, var_s, k[0] if spec.dim == 2 else k)
                lat = np.linalg.solve(S @ A, M)
            else:
                lat = M
            dom = np.asarray(spec.domain_box, dtype=float)
            if box is None:
                lo_need, hi_need = dom[:, 0], dom[:, 1]
            else:
                lo_need = dom[:, 0] - box[:, 1]
                hi_need = dom[:, 1] - box[:, 0]
            # bound integer m ranges axis by axis through the inverse lattice map
            corners = []
            for idx in range(1 << spec.dim):
                pt = [(lo_need, hi_need)[(idx >> a) & 1][a] for a in range(spec.dim)]
                corners.append(pt)
            mc = np.linalg.solve(lat, np.asarray(corners).T)
            lo_m = np.floor(mc.min(axis=1)).astype(int)
            hi_m = np.ceil(mc.max(axis=1)).astype(int)
            for m in np.ndindex(*(hi_m - lo_m + 1)):
                mm = tuple(int(a + b) for a, b in zip(m, lo_m))
                pos = lat @ np.asarray(mm, dtype=float)
                if np.all(pos >= lo_need - 1e-12) and np.all(pos <= hi_need + 1e-12):
                    yield ShearletIndex(region=region, j=j, k=tuple(k), m=mm)


def frequency_region(dim: int, point) -> str:
    """Label of the frequency-plane region containing `point`.

    2D: central square R (sup-norm < 1), cones C1/C3 (horizontal) and
    C2/C4 (vertical).  3D: central cube R and pyramids P1..P6.  Boundary
    ties resolve toward the lower region index, so the diagonal seam
    belongs to the horizontal cones (P1-pair in 3D).
    """
    p = np.asarray(point, dtype=float)
    if dim != len(p):
        raise ValueError("point dimension mismatch")
    if np.max(np.abs(p)) < 1.0:
        return "R"
    if dim == 2:
        x1, x2 = p
        if abs(x2) <= abs(x1):
            return "C1" if x1 > 0 else "C3"
        return "C2" if x2 > 0 else "C4"
    x1, x2, x3 = p
    a = np.abs(p)
    axis = int(np.argmax(a))  # argmax takes the first maximum: ties to lower index
    return f"P{axis + 1}" if p[axis] > 0 else f"P{axis + 4}"

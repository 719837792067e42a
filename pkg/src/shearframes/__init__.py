"""Compactly supported shearlet frames: construction, certification,
transforms, and sparse-approximation experiments."""

from .filters import (
    FilterPair,
    Generator,
    FactorizationError,
    ParameterError,
    squared_lowpass_magnitude,
    spectral_factorize,
    scaling_spectrum,
    compact_shearlet_2d,
    compact_shearlets_3d,
    classical_bandlimited_2d,
)
from .systems import (
    ShearletIndex,
    SystemSpec,
    scaling_matrix,
    shear_matrix,
    shear_range,
    enumerate_indices,
    frequency_region,
    make_compact_system,
    make_classical_system,
)
from .transform import (
    Raster,
    CoefficientSet,
    analyze,
    synthesize,
    frame_operator,
    invert_frame,
    n_largest,
    hard_threshold,
    reconstruct_nterm,
    IterativeSolverError,
)
from .framebounds import (
    FrequencyGrid,
    FrameBoundsReport,
    theta,
    gamma,
    r_of_c,
    estimate_bounds,
    empirical_frame_check,
)
from .cartoon import (
    RadiusFunction,
    CartoonSpec,
    PolyBump,
    random_star_set,
    random_cartoon_2d,
    rasterize_cartoon,
    surface_cartoon_3d,
)
from .lab import (
    RateCurve,
    fit_rate,
    nterm_curve,
    wavelet_baseline_curve,
    denoise,
    psnr,
)

__version__ = "0.1.0"

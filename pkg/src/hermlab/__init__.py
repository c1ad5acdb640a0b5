"""Hermite functional calculus and time-frequency numerics.

Hermite expansions and spectral multipliers m(H), modulation-space norms via
the short-time Fourier transform, special Hermite functions with twisted
convolution, and torus transference with the subordination kernel.
"""
__version__ = "0.1.0"

from .errors import (
    DimensionMismatchError,
    GridMismatchError,
    HermlabError,
    InvalidScaleError,
    QuadratureDomainError,
    ResolutionError,
    SymbolDomainError,
    UndersamplingError,
    UnsupportedDegreeError,
)
from .hermite_basis import (
    BoundaryMassWarning,
    Grid,
    GridField,
    HermiteCoeffs,
    analyze,
    default_grid,
    hermite_1d,
    hermite_nd,
    make_grid,
    multi_indices,
    project,
    synthesize,
)
from .symbols import SpectralSymbol
from .spectral_ops import (
    apply_symbol,
    default_ensemble,
    estimate_operator_norm,
    riesz_transform,
    schrodinger_propagate,
    sloc_sobolev_norm,
    wave_propagate,
)
from .timefreq import (
    MixedNormSpec,
    PhasePlaneField,
    fourier_wigner,
    mixed_norm,
    modulation_norm,
    polar_modulation_functional,
    stft,
)
from .special_hermite import (
    PlaneField,
    laguerre_fn,
    special_hermite,
    special_hermite_project,
    twisted_convolve,
)
from .torus_transfer import (
    SubordinationParams,
    TrigPolynomial,
    kernel_l1_bound_check,
    subordination_kernel,
    torus_lp_norm,
    torus_multiplier,
    transference_check,
)
from .estimators import HermiteAnalyzer, HermiteMultiplier

import types as _types

__all__ = [
    name for name, obj in dict(globals()).items()
    if not name.startswith("_") and not isinstance(obj, _types.ModuleType)
]

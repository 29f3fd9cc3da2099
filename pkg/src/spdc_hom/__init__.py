"""Noncollinear, frequency-nondegenerate type-I SPDC and Hong-Ou-Mandel interference."""

from .biphoton import (
    BiphotonParams,
    TemporalWF,
    biphoton_params,
    full_angular_frequency_wf,
    normalize,
    temporal_wf,
    two_frequency_wf,
)
from .config import SetupConfig
from .dispersion import (
    BBO,
    CrystalDispersion,
    check_crystal,
    group_index,
    index_extraordinary,
    index_extraordinary_at_angle,
    index_ordinary,
    load_crystal,
)
from .errors import (
    ConfigError,
    DegenerateWidthError,
    DerivativeDomainError,
    ForbiddenRegimeError,
    NoCollinearSolutionError,
    ResolutionError,
    SpdcError,
    ToleranceError,
    TransparencyError,
    UnsupportedRegimeError,
)
from .groupdelay import GroupDelayCoefficients, TimeScales, coefficients, pulse_regime, timescales
from .hom import (
    CombReport,
    HomCurve,
    analyze_comb,
    beamsplitter_amplitudes,
    coincidence_density_four_slit,
    coincidence_density_two_slit,
    split_probability,
    split_probability_four_slit,
    split_probability_two_slit,
    unsplit_probability,
)
from .oracle import McRun, QuadratureSpec, fft_temporal_wf, monte_carlo_hom, quadrature_split_probability
from .phasematch import (
    ConeGeometry,
    NondegeneracyPoint,
    Regime,
    collinear_angle,
    cone_geometry,
    effective_index,
    effective_index_N,
    nondegeneracy_point,
    theta0,
    xi_max,
)

__version__ = "0.1.0"

"""Density evolution and potential-function analysis for LDPC ensembles
over binary-input memoryless symmetric channels."""

from .channels import (
    ChannelFamily,
    density_for_entropy,
    density_of,
    entropy_of,
    param_for_entropy,
)
from .coupled_system import (
    SaturationRun,
    ScParams,
    ScProfile,
    coupled_potential,
    coupled_potential_derivative,
    coupled_second_derivative,
    coupling_image,
    init_profile,
    k_constant,
    run_saturation,
    sc_de_step,
    sc_fixed_point,
    shift,
    variable_form_step,
)
from .ensembles import (
    DegreeDistribution,
    DegreeTwoVariableNodesWarning,
    derivative_coeffs,
    from_edge_perspective,
    poly_apply,
    regular,
)
from .errors import (
    GridMismatch,
    InvalidArgument,
    InvalidMeasure,
    NoChannelSolution,
    NotNormalized,
    Unsupported,
)
from .grid import GridSpec, check_combine, entropy_kernel, pair_entropy
from .measures import (
    Density,
    QuantizedDensity,
    SignedDensity,
    boxast,
    delta_inf,
    delta_zero,
    entropy,
    entropy_series,
    is_degraded,
    make_density,
    mix,
    moment_mk,
    varoast,
)
from .single_system import (
    DeResult,
    ThresholdResult,
    bp_threshold,
    de_fixed_point,
    de_step,
    energy_gap,
    fixed_point_potential,
    in_basin_of_delta_inf,
    potential,
    potential_derivative,
    potential_threshold,
)

__all__ = [
    "ChannelFamily",
    "DeResult",
    "DegreeDistribution",
    "DegreeTwoVariableNodesWarning",
    "Density",
    "GridMismatch",
    "GridSpec",
    "InvalidArgument",
    "InvalidMeasure",
    "NoChannelSolution",
    "NotNormalized",
    "QuantizedDensity",
    "SaturationRun",
    "ScParams",
    "ScProfile",
    "SignedDensity",
    "ThresholdResult",
    "Unsupported",
    "boxast",
    "bp_threshold",
    "check_combine",
    "coupled_potential",
    "coupled_potential_derivative",
    "coupled_second_derivative",
    "coupling_image",
    "de_fixed_point",
    "de_step",
    "delta_inf",
    "delta_zero",
    "density_for_entropy",
    "density_of",
    "derivative_coeffs",
    "energy_gap",
    "entropy",
    "entropy_kernel",
    "entropy_of",
    "entropy_series",
    "fixed_point_potential",
    "in_basin_of_delta_inf",
    "from_edge_perspective",
    "init_profile",
    "is_degraded",
    "k_constant",
    "make_density",
    "mix",
    "moment_mk",
    "pair_entropy",
    "param_for_entropy",
    "poly_apply",
    "potential",
    "potential_derivative",
    "potential_threshold",
    "regular",
    "run_saturation",
    "sc_de_step",
    "sc_fixed_point",
    "shift",
    "variable_form_step",
]

__version__ = "0.1.0"

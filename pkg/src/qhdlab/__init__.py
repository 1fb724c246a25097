"""qhdlab: a numerical laboratory for quantum hydrodynamics.

Hydrodynamic data (sqrt_rho, Lambda) is lifted to a wave function, evolved
under the defocusing nonlinear Schroedinger flow, mapped back by polar
factorization, and audited against the functional identities and dispersive
estimates of the underlying theory.
"""

__version__ = "0.1.0"

from .errors import (
    BlowUpError,
    ConfigError,
    MissingInputError,
    NonconvergenceError,
    NotLiftableError,
    NotPositiveError,
    QhdError,
    QuantizationError,
    SizeLimitError,
    UnsupportedGridError,
    VacuumError,
)
from .grids import (
    ComplexField,
    Grid,
    RadialGrid,
    ScalarField,
    VectorField,
    inner,
    integrate,
    norm,
    norm_sq,
)
from .operators import (
    curl2d,
    divergence,
    fractional_deriv,
    gradient,
    gradient_c,
    laplacian,
    radial_laplacian,
)
from .polar import (
    HydroFields,
    PolarFactor,
    RadialHydro,
    bohm_identity_residual,
    default_eps_vac,
    irrotationality_residual,
    madelung,
    polar_factor,
    quadratic_identity_residual,
)
from .vortex_phase import PhaseFactor, VortexSet, core_profile, phase_factor
from .lifting import (
    N_REG_LADDER,
    lift_planar_product,
    lift_positive,
    lift_radial,
    lift_vortices,
    regularised_radial,
)
from .evolve import (
    SolverConfig,
    Trajectory,
    dt_psi,
    evolve,
    step_radial_cn,
    step_splitstep,
)
from .functionals import (
    DiagnosticsRecord,
    I_of_state,
    I_wave,
    dI_dt_residual,
    diagnostics_record,
    energy,
    energy_density,
    energy_flux_residual,
    lambda_field,
    mass,
    morawetz_H,
    morawetz_rhs_norms,
    pseudo_conformal_V,
    variance,
    xi_consistency_residual,
)
from .estimates import (
    DecayFit,
    circulation,
    decay_fit,
    decay_passes,
    default_window,
    kinetic_profile_distance,
    locate_minima,
    sigma_exponent,
)
from .runner import (
    Scenario,
    StabilityReport,
    build_sequence,
    parse_scenario,
    run_scenario,
    stability_experiment,
)
from .snapshots import read_field, read_ndjson, write_field, write_ndjson

__all__ = [
    "__version__",
    # errors
    "QhdError",
    "UnsupportedGridError",
    "VacuumError",
    "QuantizationError",
    "NotLiftableError",
    "NotPositiveError",
    "NonconvergenceError",
    "BlowUpError",
    "MissingInputError",
    "SizeLimitError",
    "ConfigError",
    # fields
    "Grid",
    "RadialGrid",
    "ScalarField",
    "VectorField",
    "ComplexField",
    "integrate",
    "inner",
    "norm",
    "norm_sq",
    # operators
    "gradient",
    "gradient_c",
    "divergence",
    "laplacian",
    "curl2d",
    "fractional_deriv",
    "radial_laplacian",
    # polar factorization
    "PolarFactor",
    "HydroFields",
    "RadialHydro",
    "polar_factor",
    "madelung",
    "default_eps_vac",
    "quadratic_identity_residual",
    "irrotationality_residual",
    "bohm_identity_residual",
    # vortices
    "VortexSet",
    "PhaseFactor",
    "phase_factor",
    "core_profile",
    # lifting
    "lift_positive",
    "lift_vortices",
    "lift_radial",
    "lift_planar_product",
    "regularised_radial",
    "N_REG_LADDER",
    # evolution
    "SolverConfig",
    "Trajectory",
    "evolve",
    "dt_psi",
    "step_splitstep",
    "step_radial_cn",
    # functionals
    "DiagnosticsRecord",
    "diagnostics_record",
    "mass",
    "energy",
    "energy_density",
    "lambda_field",
    "xi_consistency_residual",
    "I_of_state",
    "I_wave",
    "dI_dt_residual",
    "pseudo_conformal_V",
    "morawetz_H",
    "morawetz_rhs_norms",
    "energy_flux_residual",
    "variance",
    # estimates
    "sigma_exponent",
    "DecayFit",
    "decay_fit",
    "decay_passes",
    "default_window",
    "circulation",
    "kinetic_profile_distance",
    "locate_minima",
    # runner
    "Scenario",
    "StabilityReport",
    "parse_scenario",
    "run_scenario",
    "build_sequence",
    "stability_experiment",
    # persistence
    "write_field",
    "read_field",
    "write_ndjson",
    "read_ndjson",
]

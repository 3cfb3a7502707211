"""Pseudo-spectral laboratory for the viscous beta-plane vorticity equation."""

from .spectral import (
    GridSpec,
    LPBank,
    RealField,
    SpectralField,
    Symbol,
    apply_symbol,
    besov_norm,
    forward_transform,
    inverse_transform,
    lebesgue_norm,
    lp_bank,
    lp_project,
    riesz_symbol,
    sobolev_norm,
)
from .operators import (
    SemigroupParams,
    VelocityPair,
    biot_savart,
    gauss_kernel,
    heat_propagate,
    kernel_K,
    nonlinear_term,
    rossby_propagate,
    semigroup_propagate,
)
from .exponents import (
    ExponentTuple,
    canonical_p,
    check_admissible,
    rate_M,
    rate_N,
    smallness_value,
    strichartz_exponent,
)
from .evolution import EvolveConfig, Trajectory, energy_check, evolve, picard_solve, ynorm
from .analysis import (
    asymptotic_deficit,
    boundary_mass,
    dispersive_scan,
    fit_decay,
    strichartz_quadrature,
)

__version__ = "0.1.0"

"""Spectral numerics for oscillatory multipliers, fractional Schrodinger
propagators and Riesz means on flat tori, with decay-law experiments."""

from .torus import (
    LatticeGrid,
    SpectralField,
    GridField,
    eigenvalue,
    forward_transform,
    inverse_transform,
    grid_norm,
    pure_mode,
    random_spectral_field,
)
from .symbols import (
    SymbolParams,
    CutoffProfile,
    phi_cutoff,
    psi_complement,
    psi0,
    dyadic_bump,
    partition_residual,
    mu_symbol,
    mu_dyadic,
    gamma_region,
    riesz_mean_symbol,
    taylor_remainder,
)
from .quadrature import (
    QuadratureSpec,
    DecayFit,
    ConvergenceError,
    fourier_cosine_mu,
    fourier_cosine_mu_derivative,
    fourier_cosine_mu_dyadic,
    fourier_cosine_low_band_correction,
    dyadic_tail_order,
    dyadic_band_ratio,
    fit_decay_exponent,
    verify_small_tau_decay,
    small_tau_exponent,
)
from .operators import (
    TimeGrid,
    apply_multiplier,
    schrodinger_propagate,
    oscillating_op,
    riesz_mean_op,
    maximal_over_times,
    kernel_lattice_sum,
    verify_kernel_decay,
    sup_bound_1d_check,
    riesz_symbol_decay_check,
)
from .hardy import (
    AtomSpec,
    Atom,
    make_regular_atom,
    make_exceptional_atom,
    riesz_potential,
    heat_semigroup,
    hp_quasinorm_estimate,
    weak_lp_quasinorm,
    moment_integrals,
)
from .extrapolation import (
    CombinationScheme,
    RateReport,
    combination_coefficients,
    combination_apply,
    convergence_error,
    fit_rate,
    combination_rate_experiment,
    riesz_pointwise_experiment,
    atom_uniformity_experiment,
)

__version__ = "0.1.0"

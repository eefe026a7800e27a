//! Independent numerical oracles for the constructed solutions and the
//! identity cross-checks, collected as [`VerificationReport`]s.
//!
//! The module works in `f64`.

mod checks;
mod dunford;
mod identities;
mod report;
mod suite;

pub use checks::{
    continuity_check, dirichlet_far_field_decay, energy_scaling, laplacian_residual, nontangential_max,
    pde_residual, pde_residual_order, stencil_residual, tail_exponent, tail_in_lp, trace_norm_sequence,
    transmission_check, EnergyFit, NTMaxProfile, NTVariant, Potential, MIN_CONE_NODES,
};
pub use dunford::{
    dawson, dunford_extension, dunford_hilbert_gaussian, dunford_reconstruction, dunford_scalar_identity,
    extension_reconstruction, hilbert_gaussian, scalar_dunford_integral, sgn_reconstruction,
};
pub use identities::{
    at_threshold, axis_blowup, axis_formula, dirichlet_classical, dirichlet_routes, gradient_trace,
    hardy_involution, inverse_round_trip, inverse_round_trip_report, kernel_minimum, lpinf_alpha,
    multiplier_identity, negative_witness, positivity_scan, quadrant_sweep, residue_sweep,
    round_trip_functions, round_trip_half_width, round_trip_weight, threshold_expectation,
};
pub use report::{summary_table, timed, VerificationReport};
pub use suite::{check_names, default_sweep, geometric_spec, run_suite, SuiteSpec};

#[cfg(test)]
mod tests;

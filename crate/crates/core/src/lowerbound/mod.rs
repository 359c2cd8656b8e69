//! Moment-matched hard instances for bigness testing.

pub mod instance;
pub mod params;
pub mod priors;
pub mod probe;

pub use instance::{generate_instance, LbInstance, PriorSampler};
pub use params::{assign_parameters, eps_for_lambda, sample_size, LbParameters};
pub use priors::{
    build_priors, chebyshev_grid, opt_value, priors_from_measures, solve_lp2_discretized, Lp2Solution, Measure,
    MomentPriors, PriorReport, DEFAULT_GRID,
};
pub use probe::{indistinguishability_probe, ks_distance, wilson, ProbeRow};

//! Experiment driver for `poset-dist`: configs, CSV output, instance
//! generators, the acceptance criteria and a manifest runner.

pub mod commands;
pub mod config;
pub mod criteria;
pub mod csv;
pub mod error;
pub mod inputs;
pub mod instances;
pub mod suite;

pub use config::{ExperimentConfig, ReduceKind, TesterAlg, Verb};
pub use error::{CliError, Result};

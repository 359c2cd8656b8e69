//! Monotonicity and bigness testing for distributions over finite posets.
//!
//! The crate is organised bottom-up: [`poset`] and [`prob`] hold the data
//! model, [`oracle`] computes exact distances (backed by the small dense
//! solvers in [`lp`], [`matching`] and [`transport`]), [`reductions`] maps
//! one testing problem onto another, [`testers`] implements the sublinear
//! testers, and [`lowerbound`] builds moment-matched hard instances.

pub mod error;
pub mod formats;
pub mod lowerbound;
pub mod lp;
pub mod matching;
pub mod oracle;
pub mod par;
pub mod poset;
pub mod prob;
pub mod reductions;
pub mod testers;
pub mod transport;

pub use error::{Error, Result};
pub use poset::{Poset, PosetKind, TransitiveClosure};
pub use prob::{Distribution, PairHistogram, Rng, SampleHistogram};

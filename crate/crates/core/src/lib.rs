//! Metaheuristic training of two-hidden-layer feed-forward networks for
//! cumulative case forecasting.
//!
//! The core optimizer is an interior search algorithm extended with
//! experience-based composition and a chaotic-learning refinement of the
//! global best ([`isacl`]). Plain interior search ([`isa`]), four comparison
//! metaheuristics ([`baselines`]) and gradient back-propagation
//! ([`mfnn::bp_train`]) share the same network, data and metric code.

pub mod algorithm;
pub mod baselines;
pub mod chaos;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod isa;
pub mod isacl;
pub mod metrics;
pub mod mfnn;
pub mod optim;

pub use algorithm::Algorithm;
pub use error::{Error, Result};

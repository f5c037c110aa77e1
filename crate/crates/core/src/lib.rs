//! Thermometry at the quantum limits.
//!
//! Closed-form statistics for an ensemble of independent two-level atoms,
//! Monte Carlo simulations of a thermalizing thermometer and of a
//! non-thermalizing interferometric thermometer (single-atom shots and
//! NOON states), brute-force oracles for every closed form, and the sweep
//! and fitting machinery used to certify the `N^{-1/2}` and `N^{-1}`
//! precision laws.
//!
//! Monte Carlo trials draw from per-trial ChaCha substreams keyed by
//! `(master_seed, trial_index)`, so every result is a pure function of its
//! inputs no matter how the work is scheduled. With the `parallel` feature
//! (on by default) trials run on rayon; without it every
//! [`Execution`] mode runs sequentially.

pub mod analysis;
pub mod error;
pub mod estimators;
pub mod exec;
pub mod interferometry;
pub mod oracle;
pub mod rng;
pub mod stats;

pub use error::{Result, ThermoError};
pub use exec::Execution;
pub use rng::RngStream;
pub use stats::{InverseTemperature, ThermalSummary, TwoLevelSpec};

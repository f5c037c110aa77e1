use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, ThermoError>;

#[derive(Debug, Error)]
pub enum ThermoError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The observable does not respond to temperature, so no finite
    /// uncertainty can be propagated.
    #[error("degenerate sensitivity: {0} is zero")]
    DegenerateSensitivity(&'static str),

    #[error("unbounded estimate: p_hat = {p_hat} lies on the boundary of (0, 1)")]
    UnboundedEstimate { p_hat: f64 },

    #[error("empty batch: {valid} valid estimates out of {requested} trials (need at least 2)")]
    EmptyBatch { valid: usize, requested: usize },

    #[error("phase window violated: {lhs} <= {rhs} does not hold ({detail})")]
    PhaseWindow { lhs: f64, rhs: f64, detail: String },

    #[error("size guard exceeded: {what} = {value} > {limit}")]
    SizeGuard {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid sweep plan: {0}")]
    InvalidPlan(String),

    #[error("all trials invalid at n = {n} ({trials} trials)")]
    AllInvalid { n: u64, trials: u64 },

    #[error("cannot fit a power law to {0} points (need at least 4)")]
    TooFewPoints(usize),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ThermoError {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        ThermoError::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}

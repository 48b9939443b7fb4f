//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong during estimation, resampling, or the bench.
#[derive(Debug, Error)]
pub enum Error {
    /// Input data is unusable: too short, non-finite, or degenerate.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The optimizer or a bootstrap replicate failed numerically.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Too many bootstrap replicates failed to fit.
    #[error("bootstrap unstable: {failed} of {total} replicates failed")]
    BootstrapUnstable { failed: usize, total: usize },

    /// Scenario configuration file could not be parsed.
    #[error("bad scenario config: {0}")]
    BadConfig(String),
}

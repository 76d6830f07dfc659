//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by resampling, interval construction, and parameter
/// estimation.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested subsample size is impossible for the given data.
    #[error("invalid subsample size m={m} (n={n}, replace={replace}, min_m={min_m})")]
    InvalidSubsampleSize {
        m: usize,
        n: usize,
        replace: bool,
        min_m: usize,
    },

    /// A statistic failed while evaluating one bootstrap replicate. The whole
    /// call is aborted; silently dropping replicates would bias the quantiles.
    #[error("statistic '{statistic}' failed on replicate {replicate}: {source}")]
    Statistic {
        statistic: String,
        replicate: usize,
        #[source]
        source: Box<Error>,
    },

    /// A quantile or distance was requested from an empty sample.
    #[error("empty distribution")]
    EmptyDistribution,

    /// `ci_norm` needs at least two replicates to estimate a spread.
    #[error("need at least 2 replicates, got {got}")]
    InsufficientReplicates { got: usize },

    /// The scaling rate evaluated to a non-positive value.
    #[error("scaling rate must be positive, got tau({n}) = {value}")]
    NonpositiveRate { n: usize, value: f64 },

    /// Least-squares fit with a constant regressor.
    #[error("degenerate regression design: {0}")]
    DegenerateDesign(String),

    /// All grid dispersions were zero, so no rate can be fitted.
    #[error("statistic is degenerate: every grid dispersion is zero")]
    DegenerateStatistic,

    /// Fewer than two usable grid points survived.
    #[error("insufficient grid: {0}")]
    InsufficientGrid(String),

    /// An argument was outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The selected rows do not have the shape the statistic expects.
    #[error("dimension error: expected {expected} column(s), got {got}")]
    Dimension { expected: usize, got: usize },

    /// Too few observations for the statistic to be defined.
    #[error("insufficient data: statistic needs {needed} point(s), got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// Statistic id not present in the registry.
    #[error("unknown statistic '{0}'")]
    UnknownStatistic(String),

    /// Model tag not recognised.
    #[error("unknown model '{0}'")]
    UnknownModel(String),

    /// A Monte Carlo repetition failed; carries the location for debugging.
    #[error("study repetition failed (n={n}, repetition={repetition}): {source}")]
    Study {
        n: usize,
        repetition: usize,
        #[source]
        source: Box<Error>,
    },

    /// Invalid study or estimation configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

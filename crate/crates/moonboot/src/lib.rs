//! m-out-of-n bootstrap inference.
//!
//! The n-out-of-n bootstrap fails for a number of estimators (extreme order
//! statistics, the shorth, rank-correlation indices, ...). Drawing subsamples
//! of size m < n without replacement works under much weaker conditions,
//! provided the estimator, scaled by a rate tau_n, has a limit distribution
//! and m grows with m/n -> 0. This crate provides:
//!
//! - [`mboot`]: seeded, parallel simulation of the bootstrap distribution;
//! - [`ci_basic`], [`ci_norm`], [`ci_sherman`], [`mboot_ci`]: confidence
//!   intervals from that distribution;
//! - [`estimate_tau`]: data-driven estimation of the exponent in
//!   tau_n = n^beta;
//! - [`estimate_m_bickel`], [`estimate_m_goetze`], [`estimate_m_volatility`]:
//!   data-driven choice of the subsample size;
//! - [`sim`]: a Monte Carlo harness measuring coverage probabilities.
//!
//! Everything stochastic is a pure function of a 64-bit seed: results are
//! bit-identical for any worker-thread count.
//!
//! ```
//! use moonboot::{mboot, mboot_ci, CiMethod, ScalingRate, TauArg};
//! use moonboot::models::{generate, ModelSpec};
//! use moonboot::rng::RngStream;
//! use moonboot::stats::MeanStat;
//!
//! let data = generate(&ModelSpec::PowerMean, 400, &RngStream::new(1)).unwrap();
//! let m = (data.n() as f64).sqrt() as usize;
//! let dist = mboot(&data, &MeanStat, m, 1000, false, 42).unwrap();
//! let rate = ScalingRate::power(0.5);
//! let ivs = mboot_ci(&dist, 0.95, TauArg::Rate(&rate), &CiMethod::DISTRIBUTION_METHODS).unwrap();
//! assert!(ivs[0].lower < 0.75 && 0.75 < ivs[0].upper);
//! ```

pub mod ci;
pub mod dataset;
pub mod error;
pub mod kernels;
pub mod models;
pub mod resample;
pub mod rng;
pub mod select;
pub mod sim;
pub mod stats;
pub mod tau;

pub use ci::{
    ci_basic, ci_norm, ci_sherman, mboot_ci, slow_rate_warning, CiMethod, ConfidenceInterval,
    Provenance, ScalingRate, TauArg,
};
pub use dataset::Dataset;
pub use error::{Error, Result};
pub use kernels::{empirical_quantile, ks_distance, linear_fit, normal_quantile};
pub use resample::{draw_indices, mboot, BootstrapDistribution, Statistic};
pub use rng::RngStream;
pub use select::{
    estimate_m_bickel, estimate_m_goetze, estimate_m_volatility, sherman_m_bounds, BickelOptions,
    GoetzeOptions, MSelection, SelectionMethod, VolatilityOptions,
};
pub use tau::{estimate_tau, quantile_range_dispersion, TauEstimate, TauMethod, TauOptions};

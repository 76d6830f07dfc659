//! Data-driven estimation of the scaling exponent beta in tau_n = n^beta.
//!
//! The dispersion of the bootstrap distribution is measured at several
//! subsample sizes m_i = n^gamma_i and a least-squares line is fitted to
//! log dispersion against log m; the variance decays like m^(-2 beta), so
//! beta is minus half the slope. The gamma grid is the knob everything hinges
//! on: no default works for every estimator, and a badly guessed range can
//! make the estimate grossly inaccurate. Tune it per estimator when you can.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::kernels::{linear_fit, quantile_of_sorted, sample_variance};
use crate::resample::{mboot, Statistic};
use crate::rng::RngStream;

/// Dispersion measure used for the log-log fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TauMethod {
    /// Sample variance of the replicates (R-1 denominator).
    Variance,
    /// Averaged quantile ranges; robust when the variance is awkward.
    Quantile,
}

impl std::str::FromStr for TauMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "variance" => Ok(TauMethod::Variance),
            "quantile" => Ok(TauMethod::Quantile),
            other => Err(Error::Config(format!("unknown tau method '{other}'"))),
        }
    }
}

/// `count` equidistant values from `lo` to `hi` inclusive.
pub fn gamma_range(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Options for [`estimate_tau`].
#[derive(Debug, Clone)]
pub struct TauOptions {
    /// Bootstrap replicates per grid point.
    pub r: usize,
    pub replace: bool,
    /// Floor for the subsample sizes; combined with the statistic's own
    /// minimum.
    pub min_m: usize,
    /// Exponents for the trial sizes m_i = n^gamma_i, each in (0, 1).
    pub gamma: Vec<f64>,
    pub method: TauMethod,
}

impl Default for TauOptions {
    fn default() -> Self {
        TauOptions {
            r: 1000,
            replace: false,
            min_m: 3,
            gamma: gamma_range(0.2, 0.7, 5),
            method: TauMethod::Variance,
        }
    }
}

/// One grid point of the fit.
#[derive(Debug, Clone, PartialEq)]
pub struct TauGridPoint {
    pub gamma: f64,
    pub m: usize,
    /// Variance or quantile range of the replicates at this m, depending on
    /// the method.
    pub dispersion: f64,
}

/// Result of the rate estimation.
#[derive(Debug, Clone, PartialEq)]
pub struct TauEstimate {
    /// Estimated exponent of tau_n = n^beta: minus half the fitted slope.
    pub beta: f64,
    /// Intercept of the fitted line, i.e. the log of the limiting variance.
    pub log_v_intercept: f64,
    pub grid: Vec<TauGridPoint>,
    pub method: TauMethod,
    pub warnings: Vec<String>,
}

/// Averaged quantile ranges of a replicate sample: the mean of the five
/// ranges quantile(0.75 + 0.05 j) - quantile(0.25 - 0.05 j), j = 0..4.
pub fn quantile_range_dispersion(replicates: &[f64]) -> Result<f64> {
    if replicates.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let mut sorted = replicates.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mut total = 0.0;
    for j in 0..5 {
        let hi = 0.75 + 0.05 * j as f64;
        let lo = 0.25 - 0.05 * j as f64;
        total += quantile_of_sorted(&sorted, hi) - quantile_of_sorted(&sorted, lo);
    }
    Ok(total / 5.0)
}

/// Fit beta from (m, dispersion) pairs. Quantile ranges scale like m^(-beta)
/// rather than m^(-2 beta), so they enter the fit squared; both methods then
/// share the variance scale and beta is exactly -slope/2.
pub(crate) fn fit_beta(points: &[(usize, f64)], method: TauMethod) -> Result<(f64, f64)> {
    let xs: Vec<f64> = points.iter().map(|&(m, _)| (m as f64).ln()).collect();
    let ys: Vec<f64> = points
        .iter()
        .map(|&(_, d)| match method {
            TauMethod::Variance => d.ln(),
            TauMethod::Quantile => (d * d).ln(),
        })
        .collect();
    let (slope, intercept) = linear_fit(&xs, &ys)?;
    Ok((-slope / 2.0, intercept))
}

/// Estimate the scaling exponent from the data by resampling at the trial
/// sizes m_i = max(min_m, round(n^gamma_i)).
pub fn estimate_tau(
    data: &Dataset,
    statistic: &dyn Statistic,
    opts: &TauOptions,
    seed: u64,
) -> Result<TauEstimate> {
    if opts.r < 2 {
        return Err(Error::Config("rate estimation needs R >= 2".into()));
    }
    for &g in &opts.gamma {
        if !(g > 0.0 && g < 1.0) {
            return Err(Error::Domain(format!("gamma {g} outside (0, 1)")));
        }
    }
    let n = data.n();
    let min_m = opts.min_m.max(statistic.min_m());

    let mut grid_sizes: Vec<(f64, usize)> = Vec::new();
    let mut warnings = Vec::new();
    for &g in &opts.gamma {
        let m = ((n as f64).powf(g).round() as usize).max(min_m);
        if !opts.replace && m > n {
            warnings.push(format!("dropped grid point gamma={g}: m={m} exceeds n={n}"));
            continue;
        }
        if grid_sizes.iter().any(|&(_, held)| held == m) {
            continue;
        }
        grid_sizes.push((g, m));
    }
    if grid_sizes.len() < 2 {
        return Err(Error::InsufficientGrid(format!(
            "only {} distinct subsample size(s) from the gamma grid (n={n}, min_m={min_m})",
            grid_sizes.len()
        )));
    }

    // independent resampling noise per grid point
    let stream = RngStream::new(seed);
    let mut grid = Vec::with_capacity(grid_sizes.len());
    for (k, &(gamma, m)) in grid_sizes.iter().enumerate() {
        let point_seed = stream.substream(k as u64 + 1).effective_seed();
        let dist = mboot(data, statistic, m, opts.r, opts.replace, point_seed)?;
        let dispersion = match opts.method {
            TauMethod::Variance => sample_variance(&dist.replicates)?,
            TauMethod::Quantile => quantile_range_dispersion(&dist.replicates)?,
        };
        grid.push(TauGridPoint {
            gamma,
            m,
            dispersion,
        });
    }

    let usable: Vec<(usize, f64)> = grid
        .iter()
        .filter(|p| p.dispersion > 0.0)
        .map(|p| (p.m, p.dispersion))
        .collect();
    if usable.is_empty() {
        return Err(Error::DegenerateStatistic);
    }
    if usable.len() < grid.len() {
        warnings.push(format!(
            "{} grid point(s) had zero dispersion and were dropped from the fit",
            grid.len() - usable.len()
        ));
    }
    if usable.len() < 2 {
        return Err(Error::InsufficientGrid(
            "fewer than 2 grid points with positive dispersion".into(),
        ));
    }

    let (beta, log_v_intercept) = fit_beta(&usable, opts.method)?;
    if beta < 0.01 {
        warnings.push(format!(
            "estimated exponent beta = {beta:.4} grows slower than n^0.01: the estimator may violate the subsampling assumptions"
        ));
    }

    Ok(TauEstimate {
        beta,
        log_v_intercept,
        grid,
        method: opts.method,
        warnings,
    })
}

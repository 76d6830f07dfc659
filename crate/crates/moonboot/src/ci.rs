//! Confidence intervals from a bootstrap distribution: the quantile-flipping
//! rule, the normal-approximation rule, and the centering variant that avoids
//! the scaling rate altogether.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::kernels::{normal_quantile, quantile_of_sorted, sample_sd};
use crate::resample::{mboot, BootstrapDistribution, Statistic};
use crate::rng::RngStream;
use crate::tau::{estimate_tau, TauOptions};

/// Where a scaling rate came from. Estimated rates carry an extra caution in
/// every interval they produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    UserSupplied,
    Estimated,
}

#[derive(Clone)]
enum RateForm {
    Parametric { beta: f64 },
    Callable(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// The scaling rate tau: n -> positive real that normalizes the estimator's
/// fluctuations, usually the parametric family tau_n = n^beta.
#[derive(Clone)]
pub struct ScalingRate {
    form: RateForm,
    provenance: Provenance,
}

impl ScalingRate {
    /// tau_n = n^beta, user supplied.
    pub fn power(beta: f64) -> Self {
        ScalingRate {
            form: RateForm::Parametric { beta },
            provenance: Provenance::UserSupplied,
        }
    }

    /// tau_n = n^beta with estimated provenance.
    pub fn estimated_power(beta: f64) -> Self {
        ScalingRate {
            form: RateForm::Parametric { beta },
            provenance: Provenance::Estimated,
        }
    }

    /// Arbitrary user-supplied rate function.
    pub fn from_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalingRate {
            form: RateForm::Callable(Arc::new(f)),
            provenance: Provenance::UserSupplied,
        }
    }

    /// Evaluate tau at a sample size.
    pub fn eval(&self, n: usize) -> f64 {
        match &self.form {
            RateForm::Parametric { beta } => (n as f64).powf(*beta),
            RateForm::Callable(f) => f(n as f64),
        }
    }

    /// The exponent, when the rate is parametric.
    pub fn beta(&self) -> Option<f64> {
        match &self.form {
            RateForm::Parametric { beta } => Some(*beta),
            RateForm::Callable(_) => None,
        }
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn describe(&self) -> String {
        match &self.form {
            RateForm::Parametric { beta } => format!("n^{beta}"),
            RateForm::Callable(_) => "custom".to_string(),
        }
    }
}

impl fmt::Debug for ScalingRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalingRate({}, {:?})", self.describe(), self.provenance)
    }
}

/// Interval construction rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CiMethod {
    Basic,
    Norm,
    Sherman,
}

impl CiMethod {
    pub fn name(&self) -> &'static str {
        match self {
            CiMethod::Basic => "basic",
            CiMethod::Norm => "norm",
            CiMethod::Sherman => "sherman",
        }
    }

    /// The rules that operate on a finished distribution ("all" in the CLI).
    pub const DISTRIBUTION_METHODS: [CiMethod; 2] = [CiMethod::Basic, CiMethod::Norm];
}

impl std::str::FromStr for CiMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(CiMethod::Basic),
            "norm" => Ok(CiMethod::Norm),
            "sherman" => Ok(CiMethod::Sherman),
            other => Err(Error::Config(format!("unknown interval method '{other}'"))),
        }
    }
}

impl fmt::Display for CiMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A two-sided confidence interval plus its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    /// Confidence level 1 - alpha.
    pub level: f64,
    pub method: CiMethod,
    pub warnings: Vec<String>,
    pub m: usize,
    pub n: usize,
    pub tau_description: String,
}

impl ConfidenceInterval {
    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.lower <= theta && theta <= self.upper
    }
}

fn check_level(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("confidence level {level} outside (0, 1)")));
    }
    Ok(1.0 - level)
}

fn positive_rate(tau: &ScalingRate, n: usize) -> Result<f64> {
    let v = tau.eval(n);
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::NonpositiveRate { n, value: v });
    }
    Ok(v)
}

/// Warn when the rate decreases or increases more slowly than n^0.01: a rate
/// that flat-lines is the signature of an estimator violating the
/// subsampling conditions. Probing a doubling of n makes the check exact for
/// the parametric family (beta < 0.01).
pub fn slow_rate_warning(tau: &ScalingRate, n: usize) -> Option<String> {
    let slow = match tau.beta() {
        Some(beta) => beta < 0.01,
        None => {
            let here = tau.eval(n);
            let doubled = tau.eval(2 * n);
            !(here > 0.0) || doubled / here < 2f64.powf(0.01)
        }
    };
    if slow {
        Some(format!(
            "scaling rate {} grows slower than n^0.01: the estimator may violate the subsampling assumptions",
            tau.describe()
        ))
    } else {
        None
    }
}

fn rate_warnings(tau: &ScalingRate, n: usize) -> Vec<String> {
    let mut warnings = Vec::new();
    if tau.provenance() == Provenance::Estimated {
        warnings.push(
            "scaling rate was estimated from the data; supplying a known rate is more reliable"
                .to_string(),
        );
    }
    if let Some(w) = slow_rate_warning(tau, n) {
        warnings.push(w);
    }
    warnings
}

/// Quantile-flipping interval
/// [t_n - q(1-alpha/2)/tau(n), t_n - q(alpha/2)/tau(n)], where q are the
/// empirical quantiles of the scaled replicate deviations
/// tau(m) * (T*_i - t_n).
pub fn ci_basic(
    dist: &BootstrapDistribution,
    tau: &ScalingRate,
    level: f64,
) -> Result<ConfidenceInterval> {
    let alpha = check_level(level)?;
    if dist.replicates.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let tau_m = positive_rate(tau, dist.m)?;
    let tau_n = positive_rate(tau, dist.n)?;

    let mut scaled: Vec<f64> = dist
        .replicates
        .iter()
        .map(|&t| tau_m * (t - dist.t_n))
        .collect();
    scaled.sort_unstable_by(f64::total_cmp);
    let q_hi = quantile_of_sorted(&scaled, 1.0 - alpha / 2.0);
    let q_lo = quantile_of_sorted(&scaled, alpha / 2.0);

    Ok(ConfidenceInterval {
        lower: dist.t_n - q_hi / tau_n,
        upper: dist.t_n - q_lo / tau_n,
        level,
        method: CiMethod::Basic,
        warnings: rate_warnings(tau, dist.n),
        m: dist.m,
        n: dist.n,
        tau_description: tau.describe(),
    })
}

/// Normal-approximation interval t_n +- z_(1-alpha/2) * sigma, with
/// sigma = (tau(m)/tau(n)) * sd(T*). Only sensible for asymptotically normal
/// estimators, but converges faster when that holds.
pub fn ci_norm(
    dist: &BootstrapDistribution,
    tau: &ScalingRate,
    level: f64,
) -> Result<ConfidenceInterval> {
    let alpha = check_level(level)?;
    if dist.replicates.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    if dist.replicates.len() < 2 {
        return Err(Error::InsufficientReplicates {
            got: dist.replicates.len(),
        });
    }
    let tau_m = positive_rate(tau, dist.m)?;
    let tau_n = positive_rate(tau, dist.n)?;
    let sigma = tau_m / tau_n * sample_sd(&dist.replicates)?;
    let z = normal_quantile(1.0 - alpha / 2.0)?;

    Ok(ConfidenceInterval {
        lower: dist.t_n - z * sigma,
        upper: dist.t_n + z * sigma,
        level,
        method: CiMethod::Norm,
        warnings: rate_warnings(tau, dist.n),
        m: dist.m,
        n: dist.n,
        tau_description: tau.describe(),
    })
}

/// Centering variant: the interval is centered on the statistic of the FIRST
/// m rows in ingestion order, which cancels the scaling rate entirely. The
/// location therefore depends on the row order of the data, and the missing
/// scaling makes the interval wider; it is a last resort for unknown rates.
pub fn ci_sherman(
    data: &Dataset,
    statistic: &dyn Statistic,
    m: usize,
    r: usize,
    level: f64,
    seed: u64,
) -> Result<ConfidenceInterval> {
    let alpha = check_level(level)?;
    let n = data.n();
    if m < statistic.min_m() || m > n {
        return Err(Error::InvalidSubsampleSize {
            m,
            n,
            replace: false,
            min_m: statistic.min_m(),
        });
    }
    let head: Vec<usize> = (0..m).collect();
    let mut head_rng = RngStream::new(seed).substream(u64::MAX).rng();
    let t_first = statistic.eval(data, &head, &mut head_rng)?;

    let dist = mboot(data, statistic, m, r, false, seed)?;
    let mut deltas: Vec<f64> = dist.replicates.iter().map(|&t| t - t_first).collect();
    deltas.sort_unstable_by(f64::total_cmp);
    let q_hi = quantile_of_sorted(&deltas, 1.0 - alpha / 2.0);
    let q_lo = quantile_of_sorted(&deltas, alpha / 2.0);

    Ok(ConfidenceInterval {
        lower: t_first - q_hi,
        upper: t_first - q_lo,
        level,
        method: CiMethod::Sherman,
        warnings: Vec::new(),
        m,
        n,
        tau_description: "none (centering cancels the rate)".to_string(),
    })
}

/// Source of the scaling rate for [`mboot_ci`]. A finished distribution does
/// not retain the data, so estimating the rate needs the data and statistic
/// back.
pub enum TauArg<'a> {
    Rate(&'a ScalingRate),
    EstimateFrom {
        data: &'a Dataset,
        statistic: &'a dyn Statistic,
        seed: u64,
    },
}

/// Build the requested intervals from one distribution. When the rate is
/// estimated, every returned interval carries the estimation caution and the
/// slow-rate warning fires on the estimated exponent.
pub fn mboot_ci(
    dist: &BootstrapDistribution,
    level: f64,
    tau: TauArg<'_>,
    types: &[CiMethod],
) -> Result<Vec<ConfidenceInterval>> {
    if types.is_empty() {
        return Err(Error::Config("no interval types requested".into()));
    }
    if types.contains(&CiMethod::Sherman) {
        return Err(Error::Config(
            "the sherman interval is built from the data; use ci_sherman".into(),
        ));
    }
    let rate: ScalingRate = match tau {
        TauArg::Rate(r) => r.clone(),
        TauArg::EstimateFrom {
            data,
            statistic,
            seed,
        } => {
            let est = estimate_tau(data, statistic, &TauOptions::default(), seed)?;
            ScalingRate::estimated_power(est.beta)
        }
    };
    types
        .iter()
        .map(|method| match method {
            CiMethod::Basic => ci_basic(dist, &rate, level),
            CiMethod::Norm => ci_norm(dist, &rate, level),
            CiMethod::Sherman => unreachable!(),
        })
        .collect()
}

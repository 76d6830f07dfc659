//! Data-generating models for the simulation studies, and the power-law
//! sampler they share.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::{RngStream, StreamRng};

/// A named data-generating process together with the true parameter value of
/// its paired estimator and the true scaling exponent beta in tau_n = n^beta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ModelSpec {
    /// x ~ unif(0, 1); paired with the sample maximum (theta = 1, beta = 1).
    UnifMax,
    /// x ~ N(0, 1); paired with the shorth (theta = 0, beta = 1/3).
    NormShorth,
    /// x ~ unif(-1, 1), y = x + N(0, sd 0.5); paired with xicor
    /// (theta = 0.3818147, beta = 1/2).
    XicorLinear,
    /// x with density 3x^2 on [0, 1]; paired with the mean
    /// (theta = 3/4, beta = 1/2).
    PowerMean,
    /// Same data as `PowerMean`, paired with the first-observation estimator
    /// (theta = 3/4, beta = 0: its distribution never tightens).
    PowerMu1,
    /// x ~ Poisson(lambda); paired with the moment-difference rate estimator
    /// (theta = lambda, beta = -1/2: its variance grows with n).
    /// lambda = 0 degenerates to constant-zero data, handy for smoke tests.
    PoissonLambda { lambda: f64 },
}

impl ModelSpec {
    pub fn tag(&self) -> &'static str {
        match self {
            ModelSpec::UnifMax => "unif-max",
            ModelSpec::NormShorth => "norm-shorth",
            ModelSpec::XicorLinear => "xicor-linear",
            ModelSpec::PowerMean => "power-mean",
            ModelSpec::PowerMu1 => "power-mu1",
            ModelSpec::PoissonLambda { .. } => "poisson-lambda",
        }
    }

    /// True value of the paired estimator's target.
    pub fn true_theta(&self) -> f64 {
        match self {
            ModelSpec::UnifMax => 1.0,
            ModelSpec::NormShorth => 0.0,
            ModelSpec::XicorLinear => 0.3818147,
            ModelSpec::PowerMean | ModelSpec::PowerMu1 => 0.75,
            ModelSpec::PoissonLambda { lambda } => *lambda,
        }
    }

    /// True exponent of the scaling rate tau_n = n^beta.
    pub fn tau_beta(&self) -> f64 {
        match self {
            ModelSpec::UnifMax => 1.0,
            ModelSpec::NormShorth => 1.0 / 3.0,
            ModelSpec::XicorLinear | ModelSpec::PowerMean => 0.5,
            ModelSpec::PowerMu1 => 0.0,
            ModelSpec::PoissonLambda { .. } => -0.5,
        }
    }

    /// The statistic conventionally evaluated on this model's data.
    pub fn default_statistic(&self) -> &'static str {
        match self {
            ModelSpec::UnifMax => "max",
            ModelSpec::NormShorth => "shorth",
            ModelSpec::XicorLinear => "xicor",
            ModelSpec::PowerMean => "mean",
            ModelSpec::PowerMu1 => "mu1",
            ModelSpec::PoissonLambda { .. } => "lambda-pois",
        }
    }
}

impl std::str::FromStr for ModelSpec {
    type Err = Error;

    /// Parses a model tag, with an optional `:<lambda>` suffix for the
    /// Poisson model (`"poisson-lambda:3"`).
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unif-max" => Ok(ModelSpec::UnifMax),
            "norm-shorth" => Ok(ModelSpec::NormShorth),
            "xicor-linear" => Ok(ModelSpec::XicorLinear),
            "power-mean" => Ok(ModelSpec::PowerMean),
            "power-mu1" => Ok(ModelSpec::PowerMu1),
            "poisson-lambda" => Ok(ModelSpec::PoissonLambda { lambda: 3.0 }),
            other => {
                if let Some(rest) = other.strip_prefix("poisson-lambda:") {
                    let lambda: f64 = rest
                        .parse()
                        .map_err(|_| Error::UnknownModel(other.to_string()))?;
                    if !(lambda >= 0.0) {
                        return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
                    }
                    return Ok(ModelSpec::PoissonLambda { lambda });
                }
                Err(Error::UnknownModel(other.to_string()))
            }
        }
    }
}

impl TryFrom<String> for ModelSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ModelSpec> for String {
    fn from(m: ModelSpec) -> String {
        match m {
            ModelSpec::PoissonLambda { lambda } => format!("poisson-lambda:{lambda}"),
            other => other.tag().to_string(),
        }
    }
}

/// One draw with density (k+1)(x-a)^k / (b-a)^(k+1) on [a, b], via the
/// inverse CDF x = a + (b-a) * U^(1/(k+1)).
pub fn rpower_one(rng: &mut StreamRng, k: f64, a: f64, b: f64) -> f64 {
    let u: f64 = rng.gen();
    a + (b - a) * u.powf(1.0 / (k + 1.0))
}

/// Sample `count` i.i.d. draws from the power-law density
/// (k+1)(x-a)^k / (b-a)^(k+1) on [a, b]. k = 0 is the uniform distribution.
pub fn rpower(count: usize, k: f64, a: f64, b: f64, stream: &RngStream) -> Result<Dataset> {
    if !(k >= 0.0) {
        return Err(Error::Domain(format!("power shape k must be >= 0, got {k}")));
    }
    if !(a < b) {
        return Err(Error::Domain(format!("power bounds need a < b, got [{a}, {b}]")));
    }
    if count == 0 {
        return Err(Error::Domain("sample count must be positive".into()));
    }
    let mut rng = stream.rng();
    Ok(Dataset::from_column(
        (0..count).map(|_| rpower_one(&mut rng, k, a, b)).collect(),
    )?)
}

/// Poisson draw by sequential inversion of the CDF; exact and dependency-free
/// for the small rates used here.
pub fn poisson_one(rng: &mut StreamRng, lambda: f64) -> f64 {
    let u: f64 = rng.gen();
    let mut pmf = (-lambda).exp();
    let mut cdf = pmf;
    let mut k = 0u64;
    let cap = (10.0 * lambda + 100.0) as u64;
    while u >= cdf && k < cap {
        k += 1;
        pmf *= lambda / k as f64;
        cdf += pmf;
    }
    k as f64
}

/// Draw `n` observations from the named model.
pub fn generate(model: &ModelSpec, n: usize, stream: &RngStream) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::Domain("sample size must be positive".into()));
    }
    let mut rng = stream.rng();
    match model {
        ModelSpec::UnifMax => {
            Dataset::from_column((0..n).map(|_| rng.gen::<f64>()).collect())
        }
        ModelSpec::NormShorth => Dataset::from_column(
            (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect(),
        ),
        ModelSpec::XicorLinear => {
            let pairs: Vec<(f64, f64)> = (0..n)
                .map(|_| {
                    let x: f64 = rng.gen_range(-1.0..1.0);
                    let eps: f64 = rng.sample::<f64, _>(StandardNormal) * 0.5;
                    (x, x + eps)
                })
                .collect();
            Dataset::from_pairs(&pairs)
        }
        ModelSpec::PowerMean | ModelSpec::PowerMu1 => Dataset::from_column(
            (0..n).map(|_| rpower_one(&mut rng, 2.0, 0.0, 1.0)).collect(),
        ),
        ModelSpec::PoissonLambda { lambda } => {
            if !(*lambda >= 0.0) {
                return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
            }
            Dataset::from_column((0..n).map(|_| poisson_one(&mut rng, *lambda)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rpower_uniform_case() {
        let data = rpower(100_000, 0.0, -2.0, 4.0, &RngStream::new(1)).unwrap();
        let mean = data.rows().map(|r| r[0]).sum::<f64>() / data.n() as f64;
        // sd of uniform(-2,4) is 6/sqrt(12); 5 sigma band on the mean
        let tol = 5.0 * (6.0 / 12f64.sqrt()) / (data.n() as f64).sqrt();
        assert!((mean - 1.0).abs() < tol, "mean {mean}");
        assert!(data.rows().all(|r| (-2.0..=4.0).contains(&r[0])));
    }

    #[test]
    fn rpower_cubic_mean() {
        let data = rpower(100_000, 2.0, 0.0, 1.0, &RngStream::new(2)).unwrap();
        let mean = data.rows().map(|r| r[0]).sum::<f64>() / data.n() as f64;
        assert!((mean - 0.75).abs() < 0.005, "mean {mean}");
    }

    #[test]
    fn rpower_rejects_bad_params() {
        assert!(rpower(10, -1.0, 0.0, 1.0, &RngStream::new(0)).is_err());
        assert!(rpower(10, 2.0, 1.0, 1.0, &RngStream::new(0)).is_err());
        assert!(rpower(0, 2.0, 0.0, 1.0, &RngStream::new(0)).is_err());
    }

    #[test]
    fn generate_shapes_and_supports() {
        let s = RngStream::new(3);
        let unif = generate(&ModelSpec::UnifMax, 500, &s).unwrap();
        assert_eq!((unif.n(), unif.width()), (500, 1));
        assert!(unif.rows().all(|r| (0.0..=1.0).contains(&r[0])));

        let pairs = generate(&ModelSpec::XicorLinear, 500, &s).unwrap();
        assert_eq!(pairs.width(), 2);

        let power = generate(&ModelSpec::PowerMean, 100_000, &s).unwrap();
        let mean = power.rows().map(|r| r[0]).sum::<f64>() / power.n() as f64;
        assert!((mean - 0.75).abs() < 0.005);
    }

    #[test]
    fn poisson_moments() {
        let s = RngStream::new(4);
        let data = generate(&ModelSpec::PoissonLambda { lambda: 3.0 }, 100_000, &s).unwrap();
        let n = data.n() as f64;
        let mean = data.rows().map(|r| r[0]).sum::<f64>() / n;
        let var = data.rows().map(|r| (r[0] - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((mean - 3.0).abs() < 0.05, "mean {mean}");
        assert!((var - 3.0).abs() < 0.15, "var {var}");
    }

    #[test]
    fn poisson_zero_rate_is_constant() {
        let s = RngStream::new(5);
        let data = generate(&ModelSpec::PoissonLambda { lambda: 0.0 }, 100, &s).unwrap();
        assert!(data.rows().all(|r| r[0] == 0.0));
    }

    #[test]
    fn model_tags_round_trip() {
        for tag in [
            "unif-max",
            "norm-shorth",
            "xicor-linear",
            "power-mean",
            "power-mu1",
            "poisson-lambda:2.5",
        ] {
            let model: ModelSpec = tag.parse().unwrap();
            assert_eq!(String::from(model), tag);
        }
        let default: ModelSpec = "poisson-lambda".parse().unwrap();
        assert_eq!(default, ModelSpec::PoissonLambda { lambda: 3.0 });
        assert!("nope".parse::<ModelSpec>().is_err());
    }

    #[test]
    fn max_variance_law_holds_at_n_1000() {
        // Var(max of n uniforms) = n / ((n+2)(n+1)^2)
        let stream = RngStream::new(42);
        let n = 1000usize;
        let reps = 20_000u64;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for i in 0..reps {
            let data = generate(&ModelSpec::UnifMax, n, &stream.substream(i)).unwrap();
            let mx = data.rows().map(|r| r[0]).fold(f64::NEG_INFINITY, f64::max);
            sum += mx;
            sum_sq += mx * mx;
        }
        let mean = sum / reps as f64;
        let var = (sum_sq - reps as f64 * mean * mean) / (reps as f64 - 1.0);
        let expect = n as f64 / ((n as f64 + 2.0) * (n as f64 + 1.0).powi(2));
        assert!(
            (var / expect - 1.0).abs() < 0.1,
            "var {var} vs law {expect}"
        );
    }
}

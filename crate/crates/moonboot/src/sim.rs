//! Monte Carlo evaluation harness: coverage probability and interval length
//! over repeated draws from a model, for any combination of statistic,
//! m-rule, interval method, and scaling rate.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ci::{ci_basic, ci_norm, ci_sherman, CiMethod, ScalingRate};
use crate::error::{Error, Result};
use crate::kernels::{linear_fit, normal_quantile, sample_sd};
use crate::models::{generate, ModelSpec};
use crate::resample::mboot;
use crate::rng::RngStream;
use crate::select::{
    estimate_m_bickel, estimate_m_goetze, estimate_m_volatility, BickelOptions, GoetzeOptions,
    SelectionMethod, VolatilityOptions,
};
use crate::stats::statistic_by_id;
use crate::tau::{estimate_tau, TauOptions};

/// How the subsample size is chosen in each repetition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MRule {
    /// m = floor(c * n^beta), clamped to the statistic's valid range.
    Fixed { c: f64, beta: f64 },
    /// Data-driven selection, re-run on every repetition.
    Selector(SelectionMethod),
    /// A literal subsample size.
    Explicit(usize),
}

impl MRule {
    pub fn describe(&self) -> String {
        match self {
            MRule::Fixed { c, beta } if *c == 1.0 => format!("n^{beta}"),
            MRule::Fixed { c, beta } => format!("{c}*n^{beta}"),
            MRule::Selector(s) => format!("auto:{s}"),
            MRule::Explicit(m) => m.to_string(),
        }
    }
}

impl std::str::FromStr for MRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("auto:") {
            return Ok(MRule::Selector(rest.parse()?));
        }
        if let Ok(m) = s.parse::<usize>() {
            return Ok(MRule::Explicit(m));
        }
        let (c, power) = match s.split_once('*') {
            Some((c, power)) => (
                c.parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad m rule '{s}'")))?,
                power,
            ),
            None => (1.0, s),
        };
        let beta = power
            .strip_prefix("n^")
            .and_then(|b| b.parse::<f64>().ok())
            .ok_or_else(|| Error::Config(format!("bad m rule '{s}'")))?;
        Ok(MRule::Fixed { c, beta })
    }
}

impl TryFrom<String> for MRule {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<MRule> for String {
    fn from(r: MRule) -> String {
        r.describe()
    }
}

/// The scaling rate of a study: a known power law or data-driven estimation
/// on every repetition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TauSpec {
    Power(f64),
    Estimate,
}

impl TauSpec {
    pub fn describe(&self) -> String {
        match self {
            TauSpec::Power(beta) => format!("n^{beta}"),
            TauSpec::Estimate => "estimate".to_string(),
        }
    }
}

impl std::str::FromStr for TauSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "estimate" {
            return Ok(TauSpec::Estimate);
        }
        s.strip_prefix("n^")
            .and_then(|b| b.parse::<f64>().ok())
            .map(TauSpec::Power)
            .ok_or_else(|| Error::Config(format!("bad tau '{s}', expected n^<beta> or estimate")))
    }
}

impl TryFrom<String> for TauSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TauSpec> for String {
    fn from(t: TauSpec) -> String {
        t.describe()
    }
}

fn default_level() -> f64 {
    0.95
}
fn default_repetitions() -> usize {
    10_000
}
fn default_replicates() -> usize {
    1000
}

/// One coverage study: a model/statistic pair swept over sample sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    #[serde(default)]
    pub label: String,
    pub model: ModelSpec,
    pub statistic: String,
    pub n_grid: Vec<usize>,
    pub m_rule: MRule,
    pub ci_method: CiMethod,
    /// Required for the basic and norm methods; the sherman method ignores it.
    #[serde(default)]
    pub tau: Option<TauSpec>,
    #[serde(default = "default_level")]
    pub level: f64,
    /// Monte Carlo repetitions N per sample size.
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    /// Bootstrap replicates R per repetition.
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub replace: bool,
    #[serde(default)]
    pub seed: u64,
}

impl StudyConfig {
    fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::Config("n_grid must not be empty".into()));
        }
        if !self.n_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("n_grid must be strictly ascending".into()));
        }
        if self.repetitions < 1 || self.replicates < 1 {
            return Err(Error::Config("repetitions and replicates must be positive".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::Config(format!("level {} outside (0, 1)", self.level)));
        }
        statistic_by_id(&self.statistic)?;
        let needs_tau =
            self.ci_method != CiMethod::Sherman || matches!(self.m_rule, MRule::Selector(_));
        if needs_tau && self.tau.is_none() {
            return Err(Error::Config(
                "tau is required unless the method is sherman with a non-selector m rule".into(),
            ));
        }
        Ok(())
    }
}

/// Aggregates for one sample size.
#[derive(Debug, Clone, Serialize)]
pub struct StudyRow {
    pub n: usize,
    pub repetitions: usize,
    pub covered: usize,
    /// Fraction of repetitions whose interval contained the true parameter.
    pub coverage: f64,
    /// 95% Monte Carlo half-width of the coverage estimate.
    pub coverage_half_width: f64,
    pub mean_length: f64,
    pub mean_m: f64,
    pub sd_m: f64,
    pub elapsed_secs: f64,
}

impl PartialEq for StudyRow {
    /// Timing is not part of the result identity.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.repetitions == other.repetitions
            && self.covered == other.covered
            && self.coverage == other.coverage
            && self.coverage_half_width == other.coverage_half_width
            && self.mean_length == other.mean_length
            && self.mean_m == other.mean_m
            && self.sd_m == other.sd_m
    }
}

/// Full study output: one row per sample size, plus the fitted power law of
/// the selected m against n when a selector rule was used.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyResult {
    pub rows: Vec<StudyRow>,
    /// (c, beta) of the least-squares fit log m = log c + beta log n.
    pub m_fit: Option<(f64, f64)>,
}

pub(crate) struct RepOutcome {
    pub covered: bool,
    pub length: f64,
    pub m: usize,
}

/// Ordered parallel map over repetitions; collecting in index order keeps the
/// float aggregation identical under any scheduling.
pub(crate) fn run_reps<F>(reps: usize, f: F) -> Result<Vec<RepOutcome>>
where
    F: Fn(usize) -> Result<RepOutcome> + Send + Sync,
{
    (0..reps).into_par_iter().map(f).collect()
}

fn resolve_fixed_m(c: f64, beta: f64, n: usize) -> usize {
    // the tiny epsilon keeps exact powers like 1000^(2/3) from flooring down
    (c * (n as f64).powf(beta) + 1e-9).floor() as usize
}

fn summarize(n: usize, outcomes: &[RepOutcome], elapsed_secs: f64) -> StudyRow {
    let reps = outcomes.len();
    let covered = outcomes.iter().filter(|o| o.covered).count();
    let coverage = covered as f64 / reps as f64;
    let z = normal_quantile(0.975).expect("0.975 is in range");
    let half_width = z * (coverage * (1.0 - coverage) / reps as f64).sqrt();
    let mean_length = outcomes.iter().map(|o| o.length).sum::<f64>() / reps as f64;
    let ms: Vec<f64> = outcomes.iter().map(|o| o.m as f64).collect();
    let mean_m = ms.iter().sum::<f64>() / reps as f64;
    let sd_m = if reps > 1 { sample_sd(&ms).unwrap_or(0.0) } else { 0.0 };
    StudyRow {
        n,
        repetitions: reps,
        covered,
        coverage,
        coverage_half_width: half_width,
        mean_length,
        mean_m,
        sd_m,
        elapsed_secs,
    }
}

/// Run one coverage study. For each n in the grid, `repetitions` independent
/// datasets are drawn; each repetition resolves m, simulates the bootstrap
/// distribution, builds the interval, and records containment of the true
/// parameter (closed interval: endpoints touching theta count as covered).
/// Deterministic for a given seed at any parallelism level.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let statistic = statistic_by_id(&cfg.statistic)?;
    let statistic = statistic.as_ref();
    let theta = cfg.model.true_theta();
    let master = RngStream::new(cfg.seed);

    let mut rows = Vec::with_capacity(cfg.n_grid.len());
    for (n_index, &n) in cfg.n_grid.iter().enumerate() {
        let n_stream = master.substream(n_index as u64);
        let start = Instant::now();
        let outcomes = run_reps(cfg.repetitions, |rep| {
            one_repetition(cfg, statistic, theta, n, n_stream.substream(rep as u64)).map_err(
                |source| Error::Study {
                    n,
                    repetition: rep,
                    source: Box::new(source),
                },
            )
        })?;
        rows.push(summarize(n, &outcomes, start.elapsed().as_secs_f64()));
    }

    let m_fit = if matches!(cfg.m_rule, MRule::Selector(_)) && cfg.n_grid.len() >= 2 {
        let pairs: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.mean_m)).collect();
        Some(fit_m_scaling(&pairs)?)
    } else {
        None
    };

    Ok(StudyResult { rows, m_fit })
}

fn one_repetition(
    cfg: &StudyConfig,
    statistic: &dyn crate::resample::Statistic,
    theta: f64,
    n: usize,
    stream: RngStream,
) -> Result<RepOutcome> {
    let data = generate(&cfg.model, n, &stream.substream(0))?;

    let rate: Option<ScalingRate> = match cfg.tau {
        Some(TauSpec::Power(beta)) => Some(ScalingRate::power(beta)),
        Some(TauSpec::Estimate) => {
            let est = estimate_tau(
                &data,
                statistic,
                &TauOptions::default(),
                stream.substream(3).effective_seed(),
            )?;
            Some(ScalingRate::estimated_power(est.beta))
        }
        None => None,
    };

    let m = match cfg.m_rule {
        MRule::Fixed { c, beta } => resolve_fixed_m(c, beta, n),
        MRule::Explicit(m) => m,
        MRule::Selector(kind) => {
            let tau = rate.as_ref().expect("validated: selectors require tau");
            let seed = stream.substream(1).effective_seed();
            match kind {
                SelectionMethod::Bickel => {
                    estimate_m_bickel(
                        &data,
                        statistic,
                        tau,
                        &BickelOptions {
                            r: cfg.replicates,
                            replace: cfg.replace,
                            ..BickelOptions::default()
                        },
                        seed,
                    )?
                    .m
                }
                SelectionMethod::Goetze => {
                    estimate_m_goetze(
                        &data,
                        statistic,
                        tau,
                        &GoetzeOptions {
                            r: cfg.replicates,
                            replace: cfg.replace,
                            ..GoetzeOptions::default()
                        },
                        seed,
                    )?
                    .m
                }
                SelectionMethod::Politis => {
                    estimate_m_volatility(
                        &data,
                        statistic,
                        tau,
                        &VolatilityOptions {
                            r: cfg.replicates,
                            replace: cfg.replace,
                            level: cfg.level,
                            ..VolatilityOptions::default()
                        },
                        seed,
                    )?
                    .m
                }
            }
        }
    };
    let m = m.max(statistic.min_m());
    let m = if cfg.replace { m } else { m.min(n) };

    let ci_seed = stream.substream(2).effective_seed();
    let interval = match cfg.ci_method {
        CiMethod::Sherman => {
            ci_sherman(&data, statistic, m, cfg.replicates, cfg.level, ci_seed)?
        }
        method => {
            let tau = rate.as_ref().expect("validated: basic/norm require tau");
            let dist = mboot(&data, statistic, m, cfg.replicates, cfg.replace, ci_seed)?;
            match method {
                CiMethod::Basic => ci_basic(&dist, tau, cfg.level)?,
                CiMethod::Norm => ci_norm(&dist, tau, cfg.level)?,
                CiMethod::Sherman => unreachable!(),
            }
        }
    };

    Ok(RepOutcome {
        covered: interval.contains(theta),
        length: interval.length(),
        m,
    })
}

/// Least-squares fit of log m against log n; returns (c, beta) of
/// m = c * n^beta.
pub fn fit_m_scaling(pairs: &[(usize, f64)]) -> Result<(f64, f64)> {
    if pairs.len() < 2 {
        return Err(Error::DegenerateDesign("need at least 2 sample sizes".into()));
    }
    if pairs.iter().any(|&(_, m)| !(m > 0.0)) {
        return Err(Error::Domain("mean m must be positive for the log-log fit".into()));
    }
    let xs: Vec<f64> = pairs.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|&(_, m)| m.ln()).collect();
    let (slope, intercept) = linear_fit(&xs, &ys)?;
    Ok((intercept.exp(), slope))
}

/// One rate-estimation study: repeated estimation of beta on fresh samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauStudyConfig {
    #[serde(default)]
    pub label: String,
    pub model: ModelSpec,
    pub statistic: String,
    pub n: usize,
    pub gamma_lo: f64,
    pub gamma_hi: f64,
    #[serde(default = "default_gamma_count")]
    pub gamma_count: usize,
    pub method: crate::tau::TauMethod,
    #[serde(default = "default_estimations")]
    pub estimations: usize,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub replace: bool,
    #[serde(default)]
    pub seed: u64,
}

fn default_gamma_count() -> usize {
    5
}
fn default_estimations() -> usize {
    100
}

/// Aggregate of a rate-estimation study.
#[derive(Debug, Clone, PartialEq)]
pub struct TauStudyResult {
    pub estimations: usize,
    pub mean_beta: f64,
    pub sd_beta: f64,
    /// Runs in which the slow-rate warning fired.
    pub warned_runs: usize,
    pub betas: Vec<f64>,
}

/// Estimate beta on `estimations` independent datasets and aggregate.
pub fn run_tau_study(cfg: &TauStudyConfig) -> Result<TauStudyResult> {
    if cfg.estimations < 1 {
        return Err(Error::Config("estimations must be positive".into()));
    }
    let statistic = statistic_by_id(&cfg.statistic)?;
    let statistic = statistic.as_ref();
    let opts = TauOptions {
        r: cfg.replicates,
        replace: cfg.replace,
        gamma: crate::tau::gamma_range(cfg.gamma_lo, cfg.gamma_hi, cfg.gamma_count),
        ..TauOptions::default()
    };
    let master = RngStream::new(cfg.seed);

    let results: Vec<(f64, bool)> = (0..cfg.estimations)
        .into_par_iter()
        .map(|e| {
            let stream = master.substream(e as u64);
            let data = generate(&cfg.model, cfg.n, &stream.substream(0))?;
            let est = estimate_tau(&data, statistic, &opts, stream.substream(1).effective_seed())?;
            let warned = est.warnings.iter().any(|w| w.contains("slower than n^0.01"));
            Ok((est.beta, warned))
        })
        .collect::<Result<_>>()?;

    let betas: Vec<f64> = results.iter().map(|r| r.0).collect();
    let warned_runs = results.iter().filter(|r| r.1).count();
    let mean_beta = betas.iter().sum::<f64>() / betas.len() as f64;
    let sd_beta = if betas.len() > 1 {
        sample_sd(&betas)?
    } else {
        0.0
    };

    Ok(TauStudyResult {
        estimations: cfg.estimations,
        mean_beta,
        sd_beta,
        warned_runs,
        betas,
    })
}

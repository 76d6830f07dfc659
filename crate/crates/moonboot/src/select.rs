//! Data-driven choice of the subsample size m.
//!
//! Three searches are provided: a geometric grid matching the Kolmogorov
//! distance between adjacent sizes, an exhaustive match of every even m
//! against m/2, and the minimum-volatility index over confidence-interval
//! endpoints. The exhaustive search costs O(R n^2) and is kept deliberately
//! faithful to that definition; prefer the geometric grid when n is large.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ci::{ci_basic, ScalingRate};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::kernels::{ks_distance_sorted, sample_sd};
use crate::resample::{simulate_replicates, BootstrapDistribution, Statistic};
use crate::rng::RngStream;

/// Which search produced a selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMethod {
    Bickel,
    Goetze,
    Politis,
}

impl SelectionMethod {
    pub fn name(&self) -> &'static str {
        match self {
            SelectionMethod::Bickel => "bickel",
            SelectionMethod::Goetze => "goetze",
            SelectionMethod::Politis => "politis",
        }
    }
}

impl std::str::FromStr for SelectionMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bickel" => Ok(SelectionMethod::Bickel),
            "goetze" => Ok(SelectionMethod::Goetze),
            "politis" => Ok(SelectionMethod::Politis),
            other => Err(Error::Config(format!("unknown selection method '{other}'"))),
        }
    }
}

impl std::fmt::Display for SelectionMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A selected subsample size together with the criterion curve it minimized.
#[derive(Debug, Clone, PartialEq)]
pub struct MSelection {
    pub m: usize,
    pub method: SelectionMethod,
    /// (candidate m, criterion value) pairs, in search order.
    pub curve: Vec<(usize, f64)>,
    /// Method parameters actually used.
    pub params: BTreeMap<String, String>,
}

/// Options for [`estimate_m_bickel`].
#[derive(Debug, Clone)]
pub struct BickelOptions {
    pub r: usize,
    pub replace: bool,
    pub min_m: usize,
    /// Grid ratio for m_j = ceil(q^j n).
    pub q: f64,
}

impl Default for BickelOptions {
    fn default() -> Self {
        BickelOptions {
            r: 1000,
            replace: false,
            min_m: 3,
            q: 0.75,
        }
    }
}

/// Options for [`estimate_m_goetze`].
#[derive(Debug, Clone)]
pub struct GoetzeOptions {
    pub r: usize,
    pub replace: bool,
    pub min_m: usize,
    /// Independent samplings averaged per candidate; the raw criterion
    /// scatters a lot and averaging only somewhat remedies it.
    pub repeats: usize,
}

impl Default for GoetzeOptions {
    fn default() -> Self {
        GoetzeOptions {
            r: 1000,
            replace: false,
            min_m: 3,
            repeats: 1,
        }
    }
}

/// Options for [`estimate_m_volatility`].
#[derive(Debug, Clone)]
pub struct VolatilityOptions {
    pub r: usize,
    pub replace: bool,
    pub min_m: usize,
    /// Half-width of the endpoint smoothing window (2 h_ci + 1 values).
    pub h_ci: usize,
    /// Half-width of the running standard-deviation window.
    pub h_sigma: usize,
    /// Level of the intervals whose endpoints are tracked.
    pub level: f64,
    /// At most this many equidistant candidates are tried.
    pub max_grid: usize,
}

impl Default for VolatilityOptions {
    fn default() -> Self {
        VolatilityOptions {
            r: 1000,
            replace: false,
            min_m: 3,
            h_ci: 2,
            h_sigma: 2,
            level: 0.95,
            max_grid: 50,
        }
    }
}

/// Rule-of-thumb bounds for the centering interval's subsample size:
/// (ceil(n^(1/2)), floor(n^(2/3))), integer-exact.
pub fn sherman_m_bounds(n: usize) -> Result<(usize, usize)> {
    if n < 4 {
        return Err(Error::Domain(format!("need n >= 4, got {n}")));
    }
    let mut low = (n as f64).sqrt().ceil() as usize;
    while low * low < n {
        low += 1;
    }
    while low > 1 && (low - 1) * (low - 1) >= n {
        low -= 1;
    }

    let n2 = (n as u128) * (n as u128);
    let mut high = (n as f64).powf(2.0 / 3.0).floor() as usize;
    while ((high + 1) as u128).pow(3) <= n2 {
        high += 1;
    }
    while high > 1 && (high as u128).pow(3) > n2 {
        high -= 1;
    }
    Ok((low, high))
}

fn full_statistic(data: &Dataset, statistic: &dyn Statistic, stream: &RngStream) -> Result<f64> {
    let all: Vec<usize> = (0..data.n()).collect();
    let mut rng = stream.substream(0).rng();
    statistic.eval(data, &all, &mut rng)
}

fn positive_rate(tau: &ScalingRate, n: usize) -> Result<f64> {
    let v = tau.eval(n);
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::NonpositiveRate { n, value: v });
    }
    Ok(v)
}

/// Replicates at size m, scaled as tau(m) * (T* - t_n) and sorted.
fn scaled_sorted_set(
    data: &Dataset,
    statistic: &dyn Statistic,
    m: usize,
    r: usize,
    replace: bool,
    stream: RngStream,
    tau_m: f64,
    t_n: f64,
) -> Result<Vec<f64>> {
    let mut set = simulate_replicates(data, statistic, m, r, replace, stream, true)?;
    for v in &mut set {
        *v = tau_m * (*v - t_n);
    }
    set.sort_unstable_by(f64::total_cmp);
    Ok(set)
}

/// Geometric-grid search: m_j = ceil(q^j n), matching the scaled replicate
/// distributions of adjacent grid sizes and returning the left size of the
/// closest pair (ties prefer the larger m, i.e. more data per subsample).
pub fn estimate_m_bickel(
    data: &Dataset,
    statistic: &dyn Statistic,
    tau: &ScalingRate,
    opts: &BickelOptions,
    seed: u64,
) -> Result<MSelection> {
    if !(opts.q > 0.0 && opts.q < 1.0) {
        return Err(Error::Config(format!("grid ratio q must be in (0, 1), got {}", opts.q)));
    }
    let n = data.n();
    let min_m = opts.min_m.max(statistic.min_m());
    let grid = bickel_grid(n, opts.q, min_m);
    if grid.len() < 2 {
        return Err(Error::InsufficientGrid(format!(
            "geometric grid has {} value(s) >= {min_m} for n = {n}",
            grid.len()
        )));
    }

    let stream = RngStream::new(seed);
    let t_n = full_statistic(data, statistic, &stream)?;

    let sets: Vec<Vec<f64>> = grid
        .par_iter()
        .enumerate()
        .map(|(j, &m)| {
            scaled_sorted_set(
                data,
                statistic,
                m,
                opts.r,
                opts.replace,
                stream.substream(j as u64 + 1),
                positive_rate(tau, m)?,
                t_n,
            )
        })
        .collect::<Result<_>>()?;

    let mut curve = Vec::with_capacity(grid.len() - 1);
    for j in 0..grid.len() - 1 {
        let d = ks_distance_sorted(&sets[j], &sets[j + 1]);
        curve.push((grid[j], d));
    }
    // grid is descending, so a strict minimum scan keeps the larger m on ties
    let mut best = 0usize;
    for (j, &(_, d)) in curve.iter().enumerate() {
        if d < curve[best].1 {
            best = j;
        }
    }

    let mut params = BTreeMap::new();
    params.insert("q".into(), opts.q.to_string());
    params.insert("r".into(), opts.r.to_string());
    params.insert("replace".into(), opts.replace.to_string());
    params.insert("min_m".into(), min_m.to_string());

    Ok(MSelection {
        m: curve[best].0,
        method: SelectionMethod::Bickel,
        curve,
        params,
    })
}

pub(crate) fn bickel_grid(n: usize, q: f64, min_m: usize) -> Vec<usize> {
    let min_m = min_m.max(1);
    let mut grid = Vec::new();
    let nf = n as f64;
    let mut j = 0i32;
    loop {
        let m = (q.powi(j) * nf).ceil() as usize;
        if m < min_m {
            break;
        }
        if grid.last() != Some(&m) {
            grid.push(m);
        }
        if m == min_m {
            break;
        }
        j += 1;
    }
    grid
}

/// Exhaustive even-m search: for every even m in [2 min_m, n - 1], match the
/// scaled replicate distributions at m and m/2; the smallest distance wins
/// (ties prefer the smaller m, keeping m/n small). Cost grows as O(R n^2).
pub fn estimate_m_goetze(
    data: &Dataset,
    statistic: &dyn Statistic,
    tau: &ScalingRate,
    opts: &GoetzeOptions,
    seed: u64,
) -> Result<MSelection> {
    if opts.repeats < 1 {
        return Err(Error::Config("repeats must be at least 1".into()));
    }
    let n = data.n();
    let min_m = opts.min_m.max(statistic.min_m());
    if n < 4 * min_m {
        return Err(Error::InsufficientGrid(format!(
            "need n >= {} for the even-m search, got {n}",
            4 * min_m
        )));
    }
    let candidates: Vec<usize> = (2 * min_m..n).step_by(2).collect();
    if candidates.is_empty() {
        return Err(Error::InsufficientGrid("no even candidates".into()));
    }
    let sizes: BTreeSet<usize> = candidates
        .iter()
        .flat_map(|&m| [m, m / 2])
        .collect();

    let stream = RngStream::new(seed);
    let t_n = full_statistic(data, statistic, &stream)?;

    let mut totals: BTreeMap<usize, f64> = candidates.iter().map(|&m| (m, 0.0)).collect();
    for rep in 0..opts.repeats {
        let rep_stream = stream.substream(rep as u64 + 1);
        let sets: BTreeMap<usize, Vec<f64>> = sizes
            .par_iter()
            .map(|&m| {
                let set = scaled_sorted_set(
                    data,
                    statistic,
                    m,
                    opts.r,
                    opts.replace,
                    rep_stream.substream(m as u64),
                    positive_rate(tau, m)?,
                    t_n,
                )?;
                Ok((m, set))
            })
            .collect::<Result<_>>()?;
        for &m in &candidates {
            *totals.get_mut(&m).unwrap() += ks_distance_sorted(&sets[&m], &sets[&(m / 2)]);
        }
    }

    let curve: Vec<(usize, f64)> = candidates
        .iter()
        .map(|&m| (m, totals[&m] / opts.repeats as f64))
        .collect();
    // ascending candidates + strict minimum scan = ties go to the smaller m
    let mut best = 0usize;
    for (j, &(_, d)) in curve.iter().enumerate() {
        if d < curve[best].1 {
            best = j;
        }
    }

    let mut params = BTreeMap::new();
    params.insert("r".into(), opts.r.to_string());
    params.insert("repeats".into(), opts.repeats.to_string());
    params.insert("replace".into(), opts.replace.to_string());
    params.insert("min_m".into(), min_m.to_string());

    Ok(MSelection {
        m: curve[best].0,
        method: SelectionMethod::Goetze,
        curve,
        params,
    })
}

/// Mean over a centered window of half-width h; defined where the window
/// fits, so the output is 2h shorter than the input.
fn running_mean(xs: &[f64], h: usize) -> Vec<f64> {
    if xs.len() < 2 * h + 1 {
        return Vec::new();
    }
    (h..xs.len() - h)
        .map(|k| xs[k - h..=k + h].iter().sum::<f64>() / (2 * h + 1) as f64)
        .collect()
}

/// Sample standard deviation over a centered window of half-width h.
fn running_sd(xs: &[f64], h: usize) -> Vec<f64> {
    if xs.len() < 2 * h + 1 {
        return Vec::new();
    }
    (h..xs.len() - h)
        .map(|k| sample_sd(&xs[k - h..=k + h]).unwrap_or(0.0))
        .collect()
}

/// Minimum-volatility search: sweep at most `max_grid` equidistant candidates
/// below n/2, smooth the interval endpoints across neighboring candidates,
/// and pick the m where the running standard deviation of the smoothed
/// endpoints (lower plus upper) is smallest. Ties prefer the smaller m.
pub fn estimate_m_volatility(
    data: &Dataset,
    statistic: &dyn Statistic,
    tau: &ScalingRate,
    opts: &VolatilityOptions,
    seed: u64,
) -> Result<MSelection> {
    if opts.h_sigma < 1 {
        return Err(Error::Config("h_sigma must be at least 1".into()));
    }
    if opts.max_grid < 2 {
        return Err(Error::Config("max_grid must be at least 2".into()));
    }
    let n = data.n();
    let min_m = opts.min_m.max(statistic.min_m());
    let hi = n.saturating_sub(1) / 2; // largest m with m < n/2
    if hi < min_m {
        return Err(Error::InsufficientGrid(format!(
            "no candidates in [{min_m}, n/2) for n = {n}"
        )));
    }
    let count = opts.max_grid.min(hi - min_m + 1);
    let mut candidates: Vec<usize> = (0..count)
        .map(|t| {
            if count == 1 {
                min_m
            } else {
                min_m + ((t as f64) * (hi - min_m) as f64 / (count - 1) as f64).round() as usize
            }
        })
        .collect();
    candidates.dedup();

    let window = 2 * (opts.h_ci + opts.h_sigma) + 1;
    if candidates.len() < window {
        return Err(Error::InsufficientGrid(format!(
            "{} candidate(s) cannot fill a smoothing window of {window}",
            candidates.len()
        )));
    }

    let stream = RngStream::new(seed);
    let t_n = full_statistic(data, statistic, &stream)?;

    let endpoints: Vec<(f64, f64)> = candidates
        .par_iter()
        .enumerate()
        .map(|(k, &m)| {
            let point_stream = stream.substream(k as u64 + 1);
            let replicates =
                simulate_replicates(data, statistic, m, opts.r, opts.replace, point_stream, true)?;
            let dist = BootstrapDistribution {
                replicates,
                n,
                m,
                replace: opts.replace,
                t_n,
                seed: point_stream.effective_seed(),
                statistic_id: statistic.id().to_string(),
            };
            let iv = ci_basic(&dist, tau, opts.level)?;
            Ok((iv.lower, iv.upper))
        })
        .collect::<Result<_>>()?;

    let lowers: Vec<f64> = endpoints.iter().map(|e| e.0).collect();
    let uppers: Vec<f64> = endpoints.iter().map(|e| e.1).collect();
    let smooth_lo = running_mean(&lowers, opts.h_ci);
    let smooth_hi = running_mean(&uppers, opts.h_ci);
    let vol_lo = running_sd(&smooth_lo, opts.h_sigma);
    let vol_hi = running_sd(&smooth_hi, opts.h_sigma);

    let offset = opts.h_ci + opts.h_sigma;
    let curve: Vec<(usize, f64)> = vol_lo
        .iter()
        .zip(&vol_hi)
        .enumerate()
        .map(|(u, (lo, hi))| (candidates[u + offset], lo + hi))
        .collect();
    let mut best = 0usize;
    for (j, &(_, v)) in curve.iter().enumerate() {
        if v < curve[best].1 {
            best = j;
        }
    }

    let mut params = BTreeMap::new();
    params.insert("h_ci".into(), opts.h_ci.to_string());
    params.insert("h_sigma".into(), opts.h_sigma.to_string());
    params.insert("level".into(), opts.level.to_string());
    params.insert("max_grid".into(), opts.max_grid.to_string());
    params.insert("r".into(), opts.r.to_string());
    params.insert("replace".into(), opts.replace.to_string());
    params.insert("min_m".into(), min_m.to_string());

    Ok(MSelection {
        m: curve[best].0,
        method: SelectionMethod::Politis,
        curve,
        params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{generate, ModelSpec};
    use crate::rng::StreamRng;
    use crate::stats::{MeanStat, ShorthStat};
    use rand_distr::Distribution;

    #[test]
    fn bickel_grid_for_n_100() {
        let grid = bickel_grid(100, 0.75, 3);
        assert_eq!(grid, vec![100, 75, 57, 43, 32, 24, 18, 14, 11, 8, 6, 5, 4, 3]);
        assert!(grid.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(grid[0], 100);
    }

    #[test]
    fn goetze_candidates_for_n_20() {
        let data = generate(&ModelSpec::PowerMean, 20, &RngStream::new(1)).unwrap();
        let sel = estimate_m_goetze(
            &data,
            &MeanStat,
            &ScalingRate::power(0.5),
            &GoetzeOptions {
                r: 50,
                ..GoetzeOptions::default()
            },
            5,
        )
        .unwrap();
        let candidates: Vec<usize> = sel.curve.iter().map(|&(m, _)| m).collect();
        assert_eq!(candidates, vec![6, 8, 10, 12, 14, 16, 18]);
    }

    /// A statistic whose scaled bootstrap law is (nearly) the same at every
    /// m: a standard normal draw shrunk by 1/sqrt(m).
    struct SyntheticRoot;
    impl Statistic for SyntheticRoot {
        fn id(&self) -> &'static str {
            "synthetic-root"
        }
        fn min_m(&self) -> usize {
            1
        }
        fn eval(&self, _data: &Dataset, indices: &[usize], rng: &mut StreamRng) -> Result<f64> {
            let z: f64 = rand_distr::StandardNormal.sample(rng);
            Ok(z / (indices.len() as f64).sqrt())
        }
    }

    fn assert_selection_invariants(sel: &MSelection, min_m: usize, n: usize) {
        assert!(sel.m >= min_m && sel.m <= n, "m = {} out of range", sel.m);
        assert!(sel.curve.iter().any(|&(m, _)| m == sel.m));
        let best = sel
            .curve
            .iter()
            .map(|&(_, d)| d)
            .fold(f64::INFINITY, f64::min);
        let at_selected = sel.curve.iter().find(|&&(m, _)| m == sel.m).unwrap().1;
        assert_eq!(at_selected, best, "selected m is not the curve minimum");
    }

    #[test]
    fn bickel_invariants_on_identical_law_statistic() {
        let data = generate(&ModelSpec::NormShorth, 150, &RngStream::new(3)).unwrap();
        let sel = estimate_m_bickel(
            &data,
            &SyntheticRoot,
            &ScalingRate::power(0.5),
            &BickelOptions {
                r: 200,
                ..BickelOptions::default()
            },
            17,
        )
        .unwrap();
        assert_selection_invariants(&sel, 3, 150);
        assert_eq!(sel.method, SelectionMethod::Bickel);
    }

    #[test]
    fn goetze_invariants_on_identical_law_statistic() {
        let data = generate(&ModelSpec::NormShorth, 60, &RngStream::new(4)).unwrap();
        let sel = estimate_m_goetze(
            &data,
            &SyntheticRoot,
            &ScalingRate::power(0.5),
            &GoetzeOptions {
                r: 100,
                ..GoetzeOptions::default()
            },
            23,
        )
        .unwrap();
        assert_selection_invariants(&sel, 3, 60);
        assert!(sel.m % 2 == 0);
    }

    #[test]
    fn goetze_averaging_changes_the_curve_not_the_contract() {
        let data = generate(&ModelSpec::UnifMax, 40, &RngStream::new(6)).unwrap();
        let base = GoetzeOptions {
            r: 80,
            ..GoetzeOptions::default()
        };
        let one = estimate_m_goetze(&data, &crate::stats::MaxStat, &ScalingRate::power(1.0), &base, 9)
            .unwrap();
        let five = estimate_m_goetze(
            &data,
            &crate::stats::MaxStat,
            &ScalingRate::power(1.0),
            &GoetzeOptions { repeats: 5, ..base },
            9,
        )
        .unwrap();
        assert_selection_invariants(&one, 3, 40);
        assert_selection_invariants(&five, 3, 40);
        assert_eq!(five.params["repeats"], "5");
    }

    #[test]
    fn volatility_grid_respects_bounds() {
        let data = generate(&ModelSpec::NormShorth, 1000, &RngStream::new(5)).unwrap();
        let sel = estimate_m_volatility(
            &data,
            &ShorthStat,
            &ScalingRate::power(1.0 / 3.0),
            &VolatilityOptions {
                r: 60,
                ..VolatilityOptions::default()
            },
            31,
        )
        .unwrap();
        assert!(sel.curve.len() <= 50);
        let candidates: Vec<usize> = sel.curve.iter().map(|&(m, _)| m).collect();
        assert!(candidates.iter().all(|&m| m < 500), "{candidates:?}");
        assert_selection_invariants(&sel, 3, 1000);
    }

    #[test]
    fn volatility_on_degenerate_statistic_returns_smallest_admissible() {
        struct ConstStat;
        impl Statistic for ConstStat {
            fn id(&self) -> &'static str {
                "const"
            }
            fn min_m(&self) -> usize {
                1
            }
            fn eval(&self, _d: &Dataset, _i: &[usize], _r: &mut StreamRng) -> Result<f64> {
                Ok(2.0)
            }
        }
        let data = generate(&ModelSpec::PowerMean, 200, &RngStream::new(7)).unwrap();
        let sel = estimate_m_volatility(
            &data,
            &ConstStat,
            &ScalingRate::power(0.5),
            &VolatilityOptions {
                r: 20,
                min_m: 1,
                ..VolatilityOptions::default()
            },
            2,
        )
        .unwrap();
        assert!(sel.curve.iter().all(|&(_, v)| v == 0.0));
        assert_eq!(sel.m, sel.curve[0].0);
    }

    #[test]
    fn running_windows_on_constant_sequences() {
        let xs = [4.0; 9];
        assert_eq!(running_mean(&xs, 2), vec![4.0; 5]);
        assert_eq!(running_sd(&xs, 2), vec![0.0; 5]);
        assert!(running_mean(&xs[..3], 2).is_empty());
    }

    #[test]
    fn criterion_is_scale_invariant() {
        // doubling the statistic doubles every scaled value exactly, and the
        // Kolmogorov distance only looks at order, so the curves match bitwise
        struct Doubled<S>(S);
        impl<S: Statistic> Statistic for Doubled<S> {
            fn id(&self) -> &'static str {
                "doubled"
            }
            fn min_m(&self) -> usize {
                self.0.min_m()
            }
            fn eval(&self, d: &Dataset, i: &[usize], r: &mut StreamRng) -> Result<f64> {
                self.0.eval(d, i, r).map(|v| 2.0 * v)
            }
        }
        let data = generate(&ModelSpec::PowerMean, 120, &RngStream::new(8)).unwrap();
        let tau = ScalingRate::power(0.5);
        let opts = BickelOptions {
            r: 150,
            ..BickelOptions::default()
        };
        let plain = estimate_m_bickel(&data, &MeanStat, &tau, &opts, 44).unwrap();
        let doubled = estimate_m_bickel(&data, &Doubled(MeanStat), &tau, &opts, 44).unwrap();
        assert_eq!(plain.m, doubled.m);
        assert_eq!(plain.curve, doubled.curve);
    }

    #[test]
    fn sherman_bounds_examples() {
        assert_eq!(sherman_m_bounds(100).unwrap(), (10, 21));
        assert_eq!(sherman_m_bounds(4).unwrap(), (2, 2));
        assert!(sherman_m_bounds(3).is_err());
        // exact at perfect powers, where naive float powers drift
        assert_eq!(sherman_m_bounds(1_000_000).unwrap(), (1000, 10000));
        // n = 5 is the one small case where the ceil/floor pair inverts:
        // ceil(sqrt(5)) = 3 > floor(5^(2/3)) = 2
        assert_eq!(sherman_m_bounds(5).unwrap(), (3, 2));
        for n in 6..2000 {
            let (lo, hi) = sherman_m_bounds(n).unwrap();
            assert!(lo <= hi, "n={n}: {lo} > {hi}");
            assert!(lo * lo >= n && (lo - 1) * (lo - 1) < n);
        }
    }

    #[test]
    fn insufficient_grids_error() {
        let data = generate(&ModelSpec::PowerMean, 8, &RngStream::new(9)).unwrap();
        assert!(matches!(
            estimate_m_goetze(&data, &MeanStat, &ScalingRate::power(0.5), &GoetzeOptions::default(), 1),
            Err(Error::InsufficientGrid(_))
        ));
        // n = 3 leaves a single geometric grid value, so no adjacent pair
        let tiny = generate(&ModelSpec::PowerMean, 3, &RngStream::new(9)).unwrap();
        assert!(matches!(
            estimate_m_bickel(&tiny, &MeanStat, &ScalingRate::power(0.5), &BickelOptions::default(), 1),
            Err(Error::InsufficientGrid(_))
        ));
        let small = generate(&ModelSpec::PowerMean, 10, &RngStream::new(9)).unwrap();
        assert!(matches!(
            estimate_m_volatility(
                &small,
                &MeanStat,
                &ScalingRate::power(0.5),
                &VolatilityOptions::default(),
                1
            ),
            Err(Error::InsufficientGrid(_))
        ));
    }
}

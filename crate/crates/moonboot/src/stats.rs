//! Reference statistics: sample maximum, Tukey's shorth, Chatterjee's rank
//! correlation, the mean, and two deliberately inconsistent estimators used
//! to probe failure modes.

use rand::Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::resample::Statistic;
use crate::rng::StreamRng;

fn check_len(indices: &[usize], needed: usize) -> Result<()> {
    if indices.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: indices.len(),
        });
    }
    Ok(())
}

/// Maximum of the selected first-column values.
pub struct MaxStat;

impl Statistic for MaxStat {
    fn id(&self) -> &'static str {
        "max"
    }
    fn min_m(&self) -> usize {
        1
    }
    fn eval(&self, data: &Dataset, indices: &[usize], _rng: &mut StreamRng) -> Result<f64> {
        check_len(indices, 1)?;
        Ok(indices
            .iter()
            .map(|&i| data.first(i))
            .fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Arithmetic mean of the selected first-column values.
pub struct MeanStat;

impl Statistic for MeanStat {
    fn id(&self) -> &'static str {
        "mean"
    }
    fn min_m(&self) -> usize {
        1
    }
    fn eval(&self, data: &Dataset, indices: &[usize], _rng: &mut StreamRng) -> Result<f64> {
        check_len(indices, 1)?;
        let sum: f64 = indices.iter().map(|&i| data.first(i)).sum();
        Ok(sum / indices.len() as f64)
    }
}

/// Tukey's shorth: the mean of the data points in the shortest interval that
/// contains half of the data. With k points the window holds ceil(k/2) of
/// them; ties between equally short windows go to the leftmost one.
pub struct ShorthStat;

impl Statistic for ShorthStat {
    fn id(&self) -> &'static str {
        "shorth"
    }
    fn eval(&self, data: &Dataset, indices: &[usize], _rng: &mut StreamRng) -> Result<f64> {
        check_len(indices, 1)?;
        let mut values: Vec<f64> = indices.iter().map(|&i| data.first(i)).collect();
        values.sort_unstable_by(f64::total_cmp);
        let k = values.len();
        let h = k.div_ceil(2);
        let mut best_start = 0usize;
        let mut best_len = f64::INFINITY;
        for start in 0..=(k - h) {
            let len = values[start + h - 1] - values[start];
            if len < best_len {
                best_len = len;
                best_start = start;
            }
        }
        let window = &values[best_start..best_start + h];
        Ok(window.iter().sum::<f64>() / h as f64)
    }
}

/// Chatterjee's rank correlation xi_n in its original form. Rows must have
/// two columns (x, y). The selected pairs are ordered by x -- ties in x are
/// broken uniformly at random from the call's stream so reruns with the same
/// seed agree -- and the statistic is
/// 1 - 3 * sum |r_{i+1} - r_i| / (k^2 - 1), where r_i is the rank of y_i.
pub struct XicorStat;

impl Statistic for XicorStat {
    fn id(&self) -> &'static str {
        "xicor"
    }
    fn eval(&self, data: &Dataset, indices: &[usize], rng: &mut StreamRng) -> Result<f64> {
        if data.width() < 2 {
            return Err(Error::Dimension {
                expected: 2,
                got: data.width(),
            });
        }
        check_len(indices, 3)?;
        let k = indices.len();
        let mut pairs: Vec<(f64, f64)> = indices
            .iter()
            .map(|&i| (data.value(i, 0), data.value(i, 1)))
            .collect();
        // random shuffle then stable sort by x = uniform random order among
        // x-ties
        for i in (1..k).rev() {
            let j = rng.gen_range(0..=i);
            pairs.swap(i, j);
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

        // r_i = #{j : y_j <= y_i}, computed by ranking the y values
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| pairs[a].1.total_cmp(&pairs[b].1));
        let mut ranks = vec![0usize; k];
        let mut pos = 0usize;
        while pos < k {
            let mut end = pos;
            while end + 1 < k && pairs[order[end + 1]].1 == pairs[order[pos]].1 {
                end += 1;
            }
            for &idx in &order[pos..=end] {
                ranks[idx] = end + 1;
            }
            pos = end + 1;
        }

        let sum_abs: usize = ranks
            .windows(2)
            .map(|w| w[0].abs_diff(w[1]))
            .sum();
        let k = k as f64;
        Ok(1.0 - 3.0 * sum_abs as f64 / (k * k - 1.0))
    }
}

/// The first selected observation, an unbiased but inconsistent estimator of
/// the mean. Deliberately order-dependent: it reads the row at the first
/// index in the selection.
pub struct FirstObsStat;

impl Statistic for FirstObsStat {
    fn id(&self) -> &'static str {
        "mu1"
    }
    fn min_m(&self) -> usize {
        1
    }
    fn eval(&self, data: &Dataset, indices: &[usize], _rng: &mut StreamRng) -> Result<f64> {
        check_len(indices, 1)?;
        Ok(data.first(indices[0]))
    }
}

/// Unbiased but inconsistent estimator of a Poisson rate built from the two
/// moment estimators: k * mean - (k - 1) * sample variance, i.e.
/// sum x_i - sum (x_i - xbar)^2.
pub struct PoissonRateStat;

impl Statistic for PoissonRateStat {
    fn id(&self) -> &'static str {
        "lambda-pois"
    }
    fn min_m(&self) -> usize {
        2
    }
    fn eval(&self, data: &Dataset, indices: &[usize], _rng: &mut StreamRng) -> Result<f64> {
        check_len(indices, 2)?;
        let k = indices.len() as f64;
        let sum: f64 = indices.iter().map(|&i| data.first(i)).sum();
        let mean = sum / k;
        let ss: f64 = indices
            .iter()
            .map(|&i| {
                let d = data.first(i) - mean;
                d * d
            })
            .sum();
        Ok(sum - ss)
    }
}

/// Statistics addressable by string id.
pub fn statistic_by_id(id: &str) -> Result<Box<dyn Statistic>> {
    match id {
        "max" => Ok(Box::new(MaxStat)),
        "shorth" => Ok(Box::new(ShorthStat)),
        "xicor" => Ok(Box::new(XicorStat)),
        "mean" => Ok(Box::new(MeanStat)),
        "mu1" => Ok(Box::new(FirstObsStat)),
        "lambda-pois" => Ok(Box::new(PoissonRateStat)),
        other => Err(Error::UnknownStatistic(other.to_string())),
    }
}

/// All registered statistic ids.
pub fn statistic_ids() -> &'static [&'static str] {
    &["max", "shorth", "xicor", "mean", "mu1", "lambda-pois"]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{generate, ModelSpec};
    use crate::rng::RngStream;
    use approx::assert_abs_diff_eq;

    fn eval(stat: &dyn Statistic, data: &Dataset, indices: &[usize]) -> f64 {
        let mut rng = RngStream::new(815).rng();
        stat.eval(data, indices, &mut rng).unwrap()
    }

    #[test]
    fn max_examples() {
        let data = Dataset::from_column(vec![0.2, 0.9, 0.5]).unwrap();
        assert_eq!(eval(&MaxStat, &data, &[0, 1, 2]), 0.9);
        assert_eq!(eval(&MaxStat, &data, &[2]), 0.5);
        let mut rng = RngStream::new(0).rng();
        assert!(MaxStat.eval(&data, &[], &mut rng).is_err());
    }

    #[test]
    fn mean_examples() {
        let data = Dataset::from_column(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(eval(&MeanStat, &data, &[0, 1, 2]), 2.0);
        assert_eq!(eval(&MeanStat, &data, &[1]), 2.0);
    }

    #[test]
    fn shorth_hand_cases() {
        // k=4, h=2: windows [0,0.1], [0.1,0.2], [0.2,10]; leftmost shortest
        let data = Dataset::from_column(vec![0.0, 0.1, 0.2, 10.0]).unwrap();
        assert_abs_diff_eq!(eval(&ShorthStat, &data, &[0, 1, 2, 3]), 0.05, epsilon = 1e-15);

        // tie between [-1,0] and [0,1]; smallest start wins
        let data = Dataset::from_column(vec![-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(eval(&ShorthStat, &data, &[0, 1, 2]), -0.5);
    }

    #[test]
    fn shorth_brute_force_agreement() {
        // brute force: insertion-sort the values, evaluate every window
        fn brute(values: &[f64]) -> f64 {
            let mut v = values.to_vec();
            for i in 1..v.len() {
                let mut j = i;
                while j > 0 && v[j - 1] > v[j] {
                    v.swap(j - 1, j);
                    j -= 1;
                }
            }
            let k = v.len();
            let h = k.div_ceil(2);
            let mut best = (f64::INFINITY, 0usize);
            for s in 0..=(k - h) {
                let len = v[s + h - 1] - v[s];
                if len < best.0 {
                    best = (len, s);
                }
            }
            v[best.1..best.1 + h].iter().sum::<f64>() / h as f64
        }
        let stream = RngStream::new(64);
        for case in 0..400u64 {
            let mut rng = stream.substream(case).rng();
            let k = rng.gen_range(1..=12);
            let values: Vec<f64> = (0..k).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let data = Dataset::from_column(values.clone()).unwrap();
            let indices: Vec<usize> = (0..k).collect();
            assert_eq!(eval(&ShorthStat, &data, &indices), brute(&values));
        }
    }

    #[test]
    fn shorth_centers_on_normal_data() {
        // average a handful of samples so the cube-root noise cancels
        let stream = RngStream::new(2001);
        let mut total = 0.0;
        let reps = 20;
        for i in 0..reps {
            let data = generate(&ModelSpec::NormShorth, 10_000, &stream.substream(i)).unwrap();
            let indices: Vec<usize> = (0..data.n()).collect();
            total += eval(&ShorthStat, &data, &indices);
        }
        let mean = total / reps as f64;
        assert!(mean.abs() < 0.1, "shorth mean {mean}");
    }

    #[test]
    fn xicor_monotone_data() {
        // strictly increasing y: ranks 1..5, sum |dr| = 4 -> 1 - 12/24 = 0.5
        let pairs: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, i as f64 * 2.0)).collect();
        let data = Dataset::from_pairs(&pairs).unwrap();
        assert_eq!(eval(&XicorStat, &data, &[0, 1, 2, 3, 4]), 0.5);

        // reversed y gives the same value: xicor measures dependence, not sign
        let pairs: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, -(i as f64))).collect();
        let data = Dataset::from_pairs(&pairs).unwrap();
        assert_eq!(eval(&XicorStat, &data, &[0, 1, 2, 3, 4]), 0.5);

        // exact finite-sample value on monotone data: sum |dr| = k - 1
        let k = 10usize;
        let pairs: Vec<(f64, f64)> = (0..k).map(|i| (i as f64, (i * i) as f64)).collect();
        let data = Dataset::from_pairs(&pairs).unwrap();
        let got = eval(&XicorStat, &data, &(0..k).collect::<Vec<_>>());
        assert_eq!(got, 1.0 - 3.0 * (k as f64 - 1.0) / ((k * k) as f64 - 1.0));
    }

    #[test]
    fn xicor_needs_two_columns() {
        let data = Dataset::from_column(vec![1.0, 2.0, 3.0]).unwrap();
        let mut rng = RngStream::new(0).rng();
        assert!(matches!(
            XicorStat.eval(&data, &[0, 1, 2], &mut rng),
            Err(Error::Dimension { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn xicor_stays_in_range() {
        let stream = RngStream::new(99);
        for case in 0..300u64 {
            let mut rng = stream.substream(case).rng();
            let k = rng.gen_range(3..=12);
            let pairs: Vec<(f64, f64)> = (0..k)
                .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let data = Dataset::from_pairs(&pairs).unwrap();
            let v = eval(&XicorStat, &data, &(0..k).collect::<Vec<_>>());
            assert!((-0.5..=1.0).contains(&v), "xicor {v} out of range");
        }
    }

    #[test]
    fn xicor_population_value_on_linear_model() {
        let data = generate(&ModelSpec::XicorLinear, 100_000, &RngStream::new(7)).unwrap();
        let indices: Vec<usize> = (0..data.n()).collect();
        let v = eval(&XicorStat, &data, &indices);
        assert!(
            (v - 0.3818147).abs() < 0.01,
            "xicor estimate {v} vs population value 0.3818147"
        );
    }

    #[test]
    fn first_obs_depends_on_selection_order() {
        let data = Dataset::from_column(vec![10.0, 20.0, 30.0]).unwrap();
        assert_eq!(eval(&FirstObsStat, &data, &[2, 0, 1]), 30.0);
        assert_eq!(eval(&FirstObsStat, &data, &[0, 1, 2]), 10.0);
    }

    #[test]
    fn permutation_invariance_where_promised() {
        // integer data keeps float sums exact under reordering
        let column: Vec<f64> = vec![4.0, 9.0, 1.0, 7.0, 3.0, 8.0];
        let data = Dataset::from_column(column).unwrap();
        let fwd = [0usize, 1, 2, 3, 4, 5];
        let perm = [5usize, 2, 0, 4, 1, 3];
        for stat in [&MaxStat as &dyn Statistic, &MeanStat, &ShorthStat] {
            assert_eq!(
                eval(stat, &data, &fwd),
                eval(stat, &data, &perm),
                "{} not permutation invariant",
                stat.id()
            );
        }
        assert_ne!(eval(&FirstObsStat, &data, &fwd), eval(&FirstObsStat, &data, &perm));
    }

    #[test]
    fn translation_equivariance_where_promised() {
        // dyadic shift keeps all arithmetic exact
        let column: Vec<f64> = vec![4.0, 9.0, 1.0, 7.0];
        let shift = 2.0;
        let data = Dataset::from_column(column.clone()).unwrap();
        let shifted =
            Dataset::from_column(column.iter().map(|v| v + shift).collect()).unwrap();
        let idx = [0usize, 1, 2, 3];
        for stat in [&MaxStat as &dyn Statistic, &MeanStat, &ShorthStat] {
            assert_eq!(
                eval(stat, &data, &idx) + shift,
                eval(stat, &shifted, &idx),
                "{} not translation equivariant",
                stat.id()
            );
        }
    }

    #[test]
    fn poisson_rate_hand_cases() {
        let data = Dataset::from_column(vec![5.0, 5.0, 5.0]).unwrap();
        assert_eq!(eval(&PoissonRateStat, &data, &[0, 1, 2]), 15.0);

        let data = Dataset::from_column(vec![0.0, 2.0]).unwrap();
        assert_eq!(eval(&PoissonRateStat, &data, &[0, 1]), 0.0);

        let data = Dataset::from_column(vec![1.0, 2.0]).unwrap();
        let mut rng = RngStream::new(0).rng();
        assert!(matches!(
            PoissonRateStat.eval(&data, &[0], &mut rng),
            Err(Error::InsufficientData { needed: 2, .. })
        ));
    }

    #[test]
    fn poisson_rate_is_unbiased() {
        // sd(lambda-hat at n=50) is about sqrt(18 * 50) = 30, so averaging
        // 200k samples pins the mean to +-0.2 at three sigmas
        let stream = RngStream::new(123);
        let reps: u64 = 200_000;
        let model = ModelSpec::PoissonLambda { lambda: 3.0 };
        let total: f64 = (0..reps)
            .map(|i| {
                let data = generate(&model, 50, &stream.substream(i)).unwrap();
                let indices: Vec<usize> = (0..50).collect();
                eval(&PoissonRateStat, &data, &indices)
            })
            .sum();
        let mean = total / reps as f64;
        assert!((mean - 3.0).abs() < 0.2, "lambda-hat mean {mean}");
    }

    #[test]
    fn registry_resolves_all_ids() {
        for id in statistic_ids() {
            let stat = statistic_by_id(id).unwrap();
            assert_eq!(&stat.id(), id);
        }
        assert!(matches!(
            statistic_by_id("nope"),
            Err(Error::UnknownStatistic(_))
        ));
    }
}

//! m-out-of-n bootstrap replicate generation.
//!
//! [`mboot`] simulates the bootstrap distribution of a statistic by drawing
//! `R` subsamples of size `m`, without replacement by default. Replicates are
//! evaluated in parallel; replicate `i` always consumes substream `i + 1` of
//! the call's seed, so the output is bit-identical for any worker-thread
//! count.

use rand::Rng;
use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::{RngStream, StreamRng};

/// A statistic maps (data, selected row indices) to one real number.
///
/// Implementations must be pure given the same inputs and generator state;
/// the generator argument exists for statistics that need randomized
/// tie-breaking. Evaluating with fewer than `min_m` indices is a contract
/// violation and must return an error.
pub trait Statistic: Sync {
    /// Registry id, e.g. `"mean"`.
    fn id(&self) -> &'static str;

    /// Smallest subsample size for which the statistic makes sense.
    fn min_m(&self) -> usize {
        3
    }

    fn eval(&self, data: &Dataset, indices: &[usize], rng: &mut StreamRng) -> Result<f64>;
}

/// Simulated bootstrap distribution T*_1..T*_R plus its sampling metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapDistribution {
    /// Replicate values, in replicate order.
    pub replicates: Vec<f64>,
    /// Original sample size.
    pub n: usize,
    /// Subsample size used for each replicate.
    pub m: usize,
    /// Whether subsamples were drawn with replacement.
    pub replace: bool,
    /// Statistic evaluated on the full data.
    pub t_n: f64,
    /// Seed the distribution was generated from.
    pub seed: u64,
    /// Id of the statistic that produced the replicates.
    pub statistic_id: String,
}

/// Reusable per-thread state for index drawing: a persistent identity array
/// plus the swap log needed to undo a partial Fisher-Yates pass, so every
/// draw costs O(m) after the one-time setup.
pub(crate) struct IndexScratch {
    idx: Vec<usize>,
    swaps: Vec<usize>,
    out: Vec<usize>,
}

impl IndexScratch {
    pub(crate) fn new(n: usize) -> Self {
        IndexScratch {
            idx: (0..n).collect(),
            swaps: Vec::new(),
            out: Vec::new(),
        }
    }

    /// Draw `m` positions from [0, n). Without replacement this is a partial
    /// Fisher-Yates over the index array, which makes every size-m subset
    /// equally likely; call [`IndexScratch::undo`] afterwards to restore the
    /// array for the next draw.
    pub(crate) fn draw(&mut self, m: usize, replace: bool, rng: &mut StreamRng) -> &[usize] {
        let n = self.idx.len();
        if replace {
            self.out.clear();
            self.out.extend((0..m).map(|_| rng.gen_range(0..n)));
            return &self.out;
        }
        self.swaps.clear();
        for i in 0..m {
            let j = rng.gen_range(i..n);
            self.idx.swap(i, j);
            self.swaps.push(j);
        }
        &self.idx[..m]
    }

    pub(crate) fn undo(&mut self) {
        for (i, &j) in self.swaps.iter().enumerate().rev() {
            self.idx.swap(i, j);
        }
        self.swaps.clear();
    }

    /// Draw `m` positions and return them sorted ascending. Without
    /// replacement, sizes comparable to n use one selection-sampling scan
    /// (uniform over subsets, produced in order); smaller sizes reuse the
    /// Fisher-Yates draw plus an integer sort. Used by the size-selection
    /// searches, where ordered positions let value sorts inside the
    /// statistics hit the presorted fast path.
    pub(crate) fn draw_sorted(&mut self, m: usize, replace: bool, rng: &mut StreamRng) -> &[usize] {
        let n = self.idx.len();
        if replace {
            self.draw(m, true, rng);
            self.out.sort_unstable();
            return &self.out;
        }
        if 4 * m >= n {
            self.out.clear();
            let mut needed = m;
            for i in 0..n {
                if needed == 0 {
                    break;
                }
                if rng.gen_range(0..n - i) < needed {
                    self.out.push(i);
                    needed -= 1;
                }
            }
            return &self.out;
        }
        self.draw(m, false, rng);
        let (idx, out) = (&self.idx, &mut self.out);
        out.clear();
        out.extend_from_slice(&idx[..m]);
        self.undo();
        self.out.sort_unstable();
        &self.out
    }
}

fn validate_draw(n: usize, m: usize, replace: bool, min_m: usize) -> Result<()> {
    if m < 1.max(min_m) || (!replace && m > n) {
        return Err(Error::InvalidSubsampleSize {
            m,
            n,
            replace,
            min_m,
        });
    }
    Ok(())
}

/// Draw `m` row positions from [0, n), without replacement by default.
/// Without replacement all positions are distinct and every size-m subset has
/// equal probability; with replacement the positions are i.i.d. uniform.
pub fn draw_indices(n: usize, m: usize, replace: bool, stream: &RngStream) -> Result<Vec<usize>> {
    validate_draw(n, m, replace, 1)?;
    let mut scratch = IndexScratch::new(n);
    let mut rng = stream.rng();
    let out = scratch.draw(m, replace, &mut rng).to_vec();
    Ok(out)
}

/// Simulate the bootstrap distribution of `statistic` with `r` subsamples of
/// size `m`. Replicate `i` is evaluated on its own substream, so results are
/// reproducible under any parallel schedule; a statistic failure on any
/// replicate aborts the whole call.
pub fn mboot(
    data: &Dataset,
    statistic: &dyn Statistic,
    m: usize,
    r: usize,
    replace: bool,
    seed: u64,
) -> Result<BootstrapDistribution> {
    let n = data.n();
    validate_draw(n, m, replace, statistic.min_m())?;
    if r < 1 {
        return Err(Error::Config("R must be at least 1".into()));
    }
    let stream = RngStream::new(seed);

    let all: Vec<usize> = (0..n).collect();
    let mut tn_rng = stream.substream(0).rng();
    let t_n = statistic.eval(data, &all, &mut tn_rng)?;

    let replicates = simulate_replicates(data, statistic, m, r, replace, stream, false)?;

    Ok(BootstrapDistribution {
        replicates,
        n,
        m,
        replace,
        t_n,
        seed,
        statistic_id: statistic.id().to_string(),
    })
}

/// Replicate engine shared by [`mboot`] and the estimation searches.
/// `sorted_draws` selects the ordered sampler (same law, cheaper for
/// statistics that sort their subsample).
pub(crate) fn simulate_replicates(
    data: &Dataset,
    statistic: &dyn Statistic,
    m: usize,
    r: usize,
    replace: bool,
    stream: RngStream,
    sorted_draws: bool,
) -> Result<Vec<f64>> {
    let n = data.n();
    (0..r)
        .into_par_iter()
        .map_init(
            || IndexScratch::new(n),
            |scratch, i| {
                let mut rng = stream.substream(i as u64 + 1).rng();
                let value = if sorted_draws {
                    let indices = scratch.draw_sorted(m, replace, &mut rng);
                    statistic.eval(data, indices, &mut rng)
                } else {
                    let indices = scratch.draw(m, replace, &mut rng);
                    let value = statistic.eval(data, indices, &mut rng);
                    if !replace {
                        scratch.undo();
                    }
                    value
                };
                match value {
                    Ok(v) if v.is_finite() => Ok(v),
                    Ok(v) => Err(Error::Statistic {
                        statistic: statistic.id().to_string(),
                        replicate: i,
                        source: Box::new(Error::Domain(format!("non-finite replicate value {v}"))),
                    }),
                    Err(e) => Err(Error::Statistic {
                        statistic: statistic.id().to_string(),
                        replicate: i,
                        source: Box::new(e),
                    }),
                }
            },
        )
        .collect()
}

//! Random point sets and Monte Carlo estimates.
//!
//! Three models: Bernoulli sets (each point kept with probability p),
//! uniform m-subsets, and a uniformly random ordering of all points, read as
//! a growing prefix. Every trial draws from its own generator, seeded from
//! the master seed and the trial index, so results do not depend on thread
//! count or evaluation order. Threshold scans reuse the same trial seeds at
//! every grid point, which couples the samples across p.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::PointSet;
use crate::error::{Error, Result};
use crate::percolation::Percolator;
use crate::plane::IncidencePlane;

/// Generator used for all sampling, recorded in run configurations.
pub const RNG_ALGORITHM: &str =
    "ChaCha8 (rand_chacha 0.3); trial seed = splitmix64(seed ^ splitmix64(index))";

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959964;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of trial `index` under master seed `seed`.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, index))
}

/// Keeps each point independently with probability p.
pub fn sample_bernoulli<R: Rng + ?Sized>(
    plane: &IncidencePlane,
    p: f64,
    rng: &mut R,
) -> Result<PointSet> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadRange(format!("probability {p} outside [0, 1]")));
    }
    let mut set = plane.empty_points();
    for x in 0..plane.size() {
        if rng.gen_bool(p) {
            set.insert(x);
        }
    }
    Ok(set)
}

/// A uniformly random m-subset, via a partial Fisher–Yates shuffle.
pub fn sample_uniform_m<R: Rng + ?Sized>(
    plane: &IncidencePlane,
    m: usize,
    rng: &mut R,
) -> Result<PointSet> {
    let n = plane.size();
    if m > n {
        return Err(Error::BadRange(format!("m = {m} exceeds {n} points")));
    }
    let mut points: Vec<usize> = (0..n).collect();
    let (chosen, _) = points.partial_shuffle(rng, m);
    Ok(plane.point_set(chosen.iter().copied()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    Bernoulli { p: f64 },
    Uniform { m: usize },
    Permutation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub index: u64,
    pub seed: u64,
    #[serde(flatten)]
    pub model: Model,
    pub size: usize,
    pub percolated: bool,
    pub tau_r: Option<usize>,
    pub tau_perc: Option<usize>,
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    /// Inclusion probability, or m/n for the uniform model.
    pub p: f64,
    pub trials: usize,
    pub percolated: usize,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Estimate {
    fn from_counts(p: f64, trials: usize, percolated: usize) -> Self {
        let (ci_low, ci_high) = wilson_interval(percolated, trials);
        Estimate {
            p,
            trials,
            percolated,
            estimate: percolated as f64 / trials as f64,
            ci_low,
            ci_high,
        }
    }

    pub const CSV_HEADER: &'static str = "p,trials,percolated,estimate,ci_low,ci_high";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.6},{:.6},{:.6}",
            self.p, self.trials, self.percolated, self.estimate, self.ci_low, self.ci_high
        )
    }

    /// The two intervals intersect.
    pub fn overlaps(&self, other: &Estimate) -> bool {
        self.ci_low <= other.ci_high && other.ci_low <= self.ci_high
    }
}

/// Runs `trials` independent jobs on `threads` workers, in index order.
fn run_trials<T, F>(threads: usize, trials: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if threads <= 1 {
        return (0..trials as u64).map(job).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| (0..trials as u64).into_par_iter().map(job).collect())
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::BadRange("at least one trial is required".into()));
    }
    Ok(())
}

/// One record per Bernoulli trial.
pub fn bernoulli_trials(
    plane: &IncidencePlane,
    r: usize,
    p: f64,
    trials: usize,
    seed: u64,
    threads: usize,
) -> Result<Vec<TrialRecord>> {
    check_trials(trials)?;
    sample_bernoulli(plane, p, &mut trial_rng(seed, 0))?;
    Ok(run_trials(threads, trials, |i| {
        let mut rng = trial_rng(seed, i);
        let set = sample_bernoulli(plane, p, &mut rng).expect("p checked");
        let percolated = Percolator::new(plane, r).percolates(&set);
        TrialRecord {
            index: i,
            seed: trial_seed(seed, i),
            model: Model::Bernoulli { p },
            size: set.len(),
            percolated,
            tau_r: None,
            tau_perc: None,
        }
    }))
}

/// One record per uniform m-subset trial.
pub fn uniform_trials(
    plane: &IncidencePlane,
    r: usize,
    m: usize,
    trials: usize,
    seed: u64,
    threads: usize,
) -> Result<Vec<TrialRecord>> {
    check_trials(trials)?;
    sample_uniform_m(plane, m, &mut trial_rng(seed, 0))?;
    Ok(run_trials(threads, trials, |i| {
        let mut rng = trial_rng(seed, i);
        let set = sample_uniform_m(plane, m, &mut rng).expect("m checked");
        let percolated = Percolator::new(plane, r).percolates(&set);
        TrialRecord {
            index: i,
            seed: trial_seed(seed, i),
            model: Model::Uniform { m },
            size: set.len(),
            percolated,
            tau_r: None,
            tau_perc: None,
        }
    }))
}

fn summarize(p: f64, records: &[TrialRecord]) -> Estimate {
    let hits = records.iter().filter(|t| t.percolated).count();
    Estimate::from_counts(p, records.len(), hits)
}

/// Fraction of Bernoulli(p) samples that percolate, with a Wilson interval.
pub fn percolation_probability(
    plane: &IncidencePlane,
    r: usize,
    p: f64,
    trials: usize,
    seed: u64,
    threads: usize,
) -> Result<Estimate> {
    Ok(summarize(
        p,
        &bernoulli_trials(plane, r, p, trials, seed, threads)?,
    ))
}

/// Same estimate for uniform m-subsets; `p` in the result is m/n.
pub fn uniform_percolation_probability(
    plane: &IncidencePlane,
    r: usize,
    m: usize,
    trials: usize,
    seed: u64,
    threads: usize,
) -> Result<Estimate> {
    let p = m as f64 / plane.size() as f64;
    Ok(summarize(
        p,
        &uniform_trials(plane, r, m, trials, seed, threads)?,
    ))
}

/// One estimate per grid value; the grid must be ascending.
pub fn threshold_scan(
    plane: &IncidencePlane,
    r: usize,
    grid: &[f64],
    trials: usize,
    seed: u64,
    threads: usize,
) -> Result<Vec<Estimate>> {
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::BadRange("probability grid must be ascending".into()));
    }
    grid.iter()
        .map(|&p| percolation_probability(plane, r, p, trials, seed, threads))
        .collect()
}

/// Whether the estimates never drop by more than their interval allows.
pub fn trend_is_monotone(curve: &[Estimate]) -> bool {
    curve.windows(2).all(|w| w[1].ci_high >= w[0].ci_low)
}

/// Prefix lengths (tau_r, tau_perc) along a random ordering of the points:
/// the first prefix with r points on a common line, and the first prefix
/// that percolates.
pub fn bottleneck_trial<R: Rng + ?Sized>(
    plane: &IncidencePlane,
    r: usize,
    rng: &mut R,
) -> (usize, usize) {
    let mut order: Vec<usize> = (0..plane.size()).collect();
    order.shuffle(rng);
    bottleneck_of_order(plane, r, &order)
}

/// tau_r by line counters, tau_perc by binary search on the prefix length.
pub fn bottleneck_of_order(plane: &IncidencePlane, r: usize, order: &[usize]) -> (usize, usize) {
    assert!(r >= 1, "threshold must be positive");
    let n = plane.size();
    let mut counters = vec![0usize; n];
    let mut tau_r = n;
    'scan: for (i, &x) in order.iter().enumerate() {
        for &l in plane.lines_through_list(x) {
            counters[l as usize] += 1;
            if counters[l as usize] >= r {
                tau_r = i + 1;
                break 'scan;
            }
        }
    }
    let mut perc = Percolator::new(plane, r);
    let prefix = |len: usize| plane.point_set(order[..len].iter().copied());
    // below tau_r no line reaches the threshold, so nothing spreads
    let (mut lo, mut hi) = (tau_r - 1, n);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if perc.percolates(&prefix(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    debug_assert!(perc.percolates(&prefix(hi)));
    debug_assert!(hi == 0 || !perc.percolates(&prefix(hi - 1)));
    (tau_r, hi)
}

/// tau_perc by testing every prefix length; a reference for the binary search.
pub fn tau_perc_linear(plane: &IncidencePlane, r: usize, order: &[usize]) -> usize {
    let mut perc = Percolator::new(plane, r);
    (1..=order.len())
        .find(|&len| perc.percolates(&plane.point_set(order[..len].iter().copied())))
        .unwrap_or(order.len())
}

pub fn bottleneck_trials(
    plane: &IncidencePlane,
    r: usize,
    trials: usize,
    seed: u64,
    threads: usize,
) -> Result<Vec<TrialRecord>> {
    check_trials(trials)?;
    if r == 0 || r > plane.order() + 1 {
        return Err(Error::BadRange(format!(
            "r = {r} outside 1..={}",
            plane.order() + 1
        )));
    }
    Ok(run_trials(threads, trials, |i| {
        let mut rng = trial_rng(seed, i);
        let (tau_r, tau_perc) = bottleneck_trial(plane, r, &mut rng);
        assert!(tau_r <= tau_perc, "tau_r exceeds tau_perc on trial {i}");
        TrialRecord {
            index: i,
            seed: trial_seed(seed, i),
            model: Model::Permutation,
            size: tau_perc,
            percolated: true,
            tau_r: Some(tau_r),
            tau_perc: Some(tau_perc),
        }
    }))
}

pub const BOTTLENECK_CSV_HEADER: &str = "trial,tau_r,tau_perc,equal";

pub fn bottleneck_csv_row(t: &TrialRecord) -> String {
    let (a, b) = (t.tau_r.unwrap_or(0), t.tau_perc.unwrap_or(0));
    format!("{},{},{},{}", t.index, a, b, a == b)
}

use rayon::prelude::*;
use serde::Serialize;

use super::{bernoulli_subset, check_event_a, trial_rng, LowerBoundError};
use crate::configurations::{erdos_config, subdivided_clique_realization};

/// How often each point and each line is kept over `trials` samples drawn
/// exactly as in the pipeline.
pub fn inclusion_counts(
    n_points: usize,
    n_lines: usize,
    q: f64,
    seed: u64,
    trials: u64,
) -> (Vec<u64>, Vec<u64>) {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let mut pc = vec![0u64; n_points];
            let mut lc = vec![0u64; n_lines];
            bernoulli_subset(n_points, q, &mut rng)
                .into_iter()
                .for_each(|i| pc[i] += 1);
            bernoulli_subset(n_lines, q, &mut rng)
                .into_iter()
                .for_each(|i| lc[i] += 1);
            (pc, lc)
        })
        .reduce(
            || (vec![0; n_points], vec![0; n_lines]),
            |(mut a, mut b), (c, d)| {
                a.iter_mut().zip(c).for_each(|(x, y)| *x += y);
                b.iter_mut().zip(d).for_each(|(x, y)| *x += y);
                (a, b)
            },
        )
}

/// `|count − trials·q| ≤ sigmas · √(trials·q·(1−q))`.
pub fn binomial_within_sigma(count: u64, trials: u64, q: f64, sigmas: f64) -> bool {
    let t = trials as f64;
    (count as f64 - t * q).abs() <= sigmas * (t * q * (1.0 - q)).sqrt()
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct EventProbability {
    pub a: usize,
    pub q: f64,
    pub trials: u64,
    pub holds: u64,
    pub holds_joint: u64,
    pub estimate: f64,
    /// 95% Wilson interval for the per-side reading.
    pub interval: (f64, f64),
    pub estimate_joint: f64,
}

/// Monte Carlo estimate of the probability of the good event.
pub fn event_a_probability(
    a: usize,
    q: f64,
    seed: u64,
    trials: u64,
) -> Result<EventProbability, LowerBoundError> {
    let base = erdos_config(a)?;
    let s = base.structure()?;
    let outcomes: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let points = bernoulli_subset(s.n_points, q, &mut rng);
            let lines = bernoulli_subset(s.n_lines, q, &mut rng);
            let e = check_event_a(&s.restrict(&points, &lines), q, a);
            (e.holds, e.holds_joint)
        })
        .collect();
    let holds = outcomes.iter().filter(|o| o.0).count() as u64;
    let holds_joint = outcomes.iter().filter(|o| o.1).count() as u64;
    let n = trials.max(1) as f64;
    Ok(EventProbability {
        a,
        q,
        trials,
        holds,
        holds_joint,
        estimate: holds as f64 / n,
        interval: wilson_interval(holds, trials, 1.96),
        estimate_joint: holds_joint as f64 / n,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SurvivalEstimate {
    pub k: usize,
    pub q: f64,
    pub trials: u64,
    pub survived: u64,
    pub estimate: f64,
    /// `q^((3k² − k)/2)`.
    pub expected: f64,
    pub within_3_sigma: bool,
}

/// Fraction of samples of a planted copy in which every one of its points
/// and lines is kept.
pub fn copy_survival_estimate(
    k: usize,
    q: f64,
    seed: u64,
    trials: u64,
) -> Result<SurvivalEstimate, LowerBoundError> {
    let c = subdivided_clique_realization(k)?;
    let (np, nl) = (c.points.len(), c.lines.len());
    let survived = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = trial_rng(seed, t);
            bernoulli_subset(np, q, &mut rng).len() == np
                && bernoulli_subset(nl, q, &mut rng).len() == nl
        })
        .count() as u64;
    let expected = q.powi(((3 * k * k - k) / 2) as i32);
    Ok(SurvivalEstimate {
        k,
        q,
        trials,
        survived,
        estimate: survived as f64 / trials.max(1) as f64,
        expected,
        within_3_sigma: binomial_within_sigma(survived, trials, expected, 3.0),
    })
}

//! Random sampling of the standard configuration followed by deleting one
//! point from every subdivided k-clique, with certification of the result.

mod report;
mod stats;

use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::configurations::{erdos_config, ConfigError, Configuration, IncidenceStructure};
use crate::patterns::{
    contains, count_subdivided_cliques, pattern_subdivided_clique, Budget, PatternError,
    SearchOutcome,
};

pub use report::{exponent_report, trials_csv, ExponentReport, LinearFit};
pub use stats::{
    binomial_within_sigma, copy_survival_estimate, event_a_probability, inclusion_counts,
    wilson_interval, EventProbability, SurvivalEstimate,
};

/// Identifies the generator so trials can be reproduced elsewhere.
pub const RNG_ALGORITHM: &str =
    "chacha8 (rand_chacha 0.9): seed_from_u64(seed), stream = trial index";

#[derive(Debug, Error)]
pub enum LowerBoundError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleParams {
    /// Side parameter of the standard configuration, `N = A³`.
    pub a: usize,
    pub k: usize,
    pub q: f64,
    pub seed: u64,
    pub trials: usize,
    /// Node budget for each clique enumeration; `None` is unlimited.
    pub budget: Option<u64>,
}

/// `N^(−(k+6)/(9k+6))` with `N = A³`.
pub fn default_q(a: usize, k: usize) -> f64 {
    let n = (a as f64).powi(3);
    n.powf(-((k + 6) as f64) / ((9 * k + 6) as f64))
}

impl SampleParams {
    pub fn new(a: usize, k: usize, seed: u64, trials: usize) -> Self {
        Self {
            a,
            k,
            q: default_q(a, k),
            seed,
            trials,
            budget: None,
        }
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    pub fn validate(&self) -> Result<(), LowerBoundError> {
        if self.a < 2 {
            return Err(LowerBoundError::Params(format!(
                "A must be at least 2, got {}",
                self.a
            )));
        }
        if self.k < 3 {
            return Err(LowerBoundError::Params(format!(
                "k must be at least 3, got {}",
                self.k
            )));
        }
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(LowerBoundError::Params(format!(
                "q must lie in (0, 1], got {}",
                self.q
            )));
        }
        if self.trials == 0 {
            return Err(LowerBoundError::Params("trials must be positive".into()));
        }
        Ok(())
    }

    /// `N = A³`.
    pub fn n_base(&self) -> usize {
        self.a.pow(3)
    }
}

/// The generator for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Indices kept when each of `n` elements survives independently with
/// probability `q`.
pub fn bernoulli_subset(n: usize, q: f64, rng: &mut impl Rng) -> Vec<usize> {
    (0..n).filter(|_| rng.random::<f64>() < q).collect()
}

/// Keeps each point, then each line, independently with probability `q`.
pub fn sample_subconfiguration(
    base: &Configuration,
    q: f64,
    rng: &mut impl Rng,
) -> Result<Configuration, ConfigError> {
    let points = bernoulli_subset(base.points.len(), q, rng);
    let lines = bernoulli_subset(base.lines.len(), q, rng);
    base.restrict(&points, &lines)
}

/// The three conditions of the good event for a sample of the standard
/// configuration with parameter `A`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EventA {
    pub size_window: bool,
    pub max_degree_ok: bool,
    pub max_degree: usize,
    /// Points, and lines, with degree in `[qA/4, 2qA]`.
    pub typical_points: usize,
    pub typical_lines: usize,
    /// Each side separately has at least `qN/4` typical elements.
    pub typical_each: bool,
    /// Points and lines together have at least `qN/4`.
    pub typical_joint: bool,
    /// All three conditions with the per-side reading.
    pub holds: bool,
    pub holds_joint: bool,
}

pub fn check_event_a(s: &IncidenceStructure, q: f64, a: usize) -> EventA {
    let n = (a as f64).powi(3);
    let (lo, hi) = (q * a as f64 / 4.0, 2.0 * q * a as f64);
    let in_window = |x: usize| (x as f64) > q * n / 2.0 && (x as f64) < 2.0 * q * n;
    let size_window = in_window(s.n_points) && in_window(s.n_lines);
    let pd = s.point_lines.iter().map(Vec::len);
    let ld = s.line_points.iter().map(Vec::len);
    let max_degree = pd.clone().chain(ld.clone()).max().unwrap_or(0);
    let max_degree_ok = (max_degree as f64) <= hi;
    let typical = |d: usize| (d as f64) >= lo && (d as f64) <= hi;
    let typical_points = pd.filter(|&d| typical(d)).count();
    let typical_lines = ld.filter(|&d| typical(d)).count();
    let need = q * n / 4.0;
    let typical_each = typical_points as f64 >= need && typical_lines as f64 >= need;
    let typical_joint = (typical_points + typical_lines) as f64 >= need;
    EventA {
        size_window,
        max_degree_ok,
        max_degree,
        typical_points,
        typical_lines,
        typical_each,
        typical_joint,
        holds: size_window && max_degree_ok && typical_each,
        holds_joint: size_window && max_degree_ok && typical_joint,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Deletion {
    /// Distinct copies found before deletion.
    pub copies: u64,
    /// Host point indices removed, ascending.
    pub deleted_points: Vec<usize>,
    pub edges_removed: usize,
    /// False when the enumeration ran out of budget.
    pub valid: bool,
    /// The independent detector found no copy in the output.
    pub certified: bool,
}

/// Runs the general containment search for a subdivided k-clique.
pub fn certify_clique_free(s: &IncidenceStructure, k: usize) -> Result<bool, LowerBoundError> {
    let r = contains(s, &pattern_subdivided_clique(k)?, Budget::unlimited())?;
    Ok(r.outcome == SearchOutcome::Absent)
}

/// Deletes the smallest-index white point of every copy not already
/// destroyed by an earlier deletion, then certifies the result.
pub fn delete_and_certify(
    c: &Configuration,
    k: usize,
    budget: Budget,
) -> Result<(Configuration, Deletion), LowerBoundError> {
    let s = c.structure()?;
    let found = count_subdivided_cliques(&s, k, budget)?;
    if !found.complete {
        let d = Deletion {
            copies: found.count,
            deleted_points: vec![],
            edges_removed: 0,
            valid: false,
            certified: false,
        };
        return Ok((c.clone(), d));
    }
    let mut deleted = vec![false; s.n_points];
    for copy in &found.witnesses {
        let intact = copy.blacks.iter().chain(&copy.whites).all(|&p| !deleted[p]);
        if intact {
            let w = *copy.whites.iter().min().expect("k >= 3 gives whites");
            deleted[w] = true;
        }
    }
    let deleted_points: Vec<usize> = (0..s.n_points).filter(|&p| deleted[p]).collect();
    let edges_removed = deleted_points.iter().map(|&p| s.point_lines[p].len()).sum();
    let keep: Vec<usize> = (0..s.n_points).filter(|&p| !deleted[p]).collect();
    let all_lines: Vec<usize> = (0..s.n_lines).collect();
    let out = c.restrict(&keep, &all_lines)?;
    let certified = certify_clique_free(&out.structure()?, k)?;
    Ok((
        out,
        Deletion {
            copies: found.count,
            deleted_points,
            edges_removed,
            valid: true,
            certified,
        },
    ))
}

/// One run of the pipeline. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    pub a: usize,
    pub k: usize,
    pub q: f64,
    pub seed: u64,
    pub trial: u64,
    pub base_points: usize,
    pub base_incidences: usize,
    pub sampled_points: usize,
    pub sampled_lines: usize,
    pub sampled_incidences: usize,
    pub event_a: bool,
    pub event_a_joint: bool,
    pub copies: u64,
    pub deleted: usize,
    pub edges_removed: usize,
    pub remaining_points: usize,
    pub remaining_lines: usize,
    pub remaining_incidences: usize,
    /// Size of each side after equalisation.
    pub n: usize,
    pub final_incidences: usize,
    pub valid: bool,
    pub certified: bool,
}

/// Samples, deletes, certifies and equalises to `n = min(|P″|, |L″|, ⌊qN/4⌋)`
/// points and lines by uniform down-sampling.
pub fn run_trial(
    base: &Configuration,
    params: &SampleParams,
    trial: u64,
) -> Result<(TrialReport, Configuration), LowerBoundError> {
    params.validate()?;
    let mut rng = trial_rng(params.seed, trial);
    let sampled = sample_subconfiguration(base, params.q, &mut rng)?;
    let ss = sampled.structure()?;
    let event = check_event_a(&ss, params.q, params.a);
    let (after, deletion) = delete_and_certify(&sampled, params.k, Budget(params.budget))?;
    let after_inc = after.incidence_list()?.len();
    let cap = (params.q * params.n_base() as f64 / 4.0).floor() as usize;
    let n = after.points.len().min(after.lines.len()).min(cap);
    let mut pick = |len: usize| {
        let mut v = sample_indices(&mut rng, len, n).into_vec();
        v.sort_unstable();
        v
    };
    let keep_points = pick(after.points.len());
    let keep_lines = pick(after.lines.len());
    let last = after.restrict(&keep_points, &keep_lines)?;
    let certified =
        deletion.valid && deletion.certified && certify_clique_free(&last.structure()?, params.k)?;
    let report = TrialReport {
        a: params.a,
        k: params.k,
        q: params.q,
        seed: params.seed,
        trial,
        base_points: base.points.len(),
        base_incidences: base.incidence_list()?.len(),
        sampled_points: sampled.points.len(),
        sampled_lines: sampled.lines.len(),
        sampled_incidences: ss.n_incidences(),
        event_a: event.holds,
        event_a_joint: event.holds_joint,
        copies: deletion.copies,
        deleted: deletion.deleted_points.len(),
        edges_removed: deletion.edges_removed,
        remaining_points: after.points.len(),
        remaining_lines: after.lines.len(),
        remaining_incidences: after_inc,
        n,
        final_incidences: last.incidence_list()?.len(),
        valid: deletion.valid,
        certified,
    };
    Ok((report, last))
}

/// Runs `params.trials` independent trials in parallel; rows are in trial
/// order.
pub fn run_trials(params: &SampleParams) -> Result<Vec<TrialReport>, LowerBoundError> {
    params.validate()?;
    let base = erdos_config(params.a)?;
    (0..params.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(&base, params, t).map(|r| r.0))
        .collect()
}

use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{run_trial, LowerBoundError, SampleParams, TrialReport, RNG_ALGORITHM};
use crate::configurations::{erdos_config, erdos_incidence_formula};

/// Least-squares fit of `ln I` against `ln n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
    pub stderr: Option<f64>,
    /// 95% Student-t interval for the slope.
    pub ci: Option<(f64, f64)>,
}

impl LinearFit {
    /// Fits `y = slope·x + intercept`; needs two distinct `x` values.
    pub fn fit(xy: &[(f64, f64)]) -> Option<LinearFit> {
        let m = xy.len();
        if m < 2 {
            return None;
        }
        let mf = m as f64;
        let mx = xy.iter().map(|p| p.0).sum::<f64>() / mf;
        let my = xy.iter().map(|p| p.1).sum::<f64>() / mf;
        let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
        if sxx == 0.0 {
            return None;
        }
        let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let (stderr, ci) = if m > 2 {
            let rss: f64 = xy
                .iter()
                .map(|p| (p.1 - intercept - slope * p.0).powi(2))
                .sum();
            let se = (rss / (mf - 2.0) / sxx).sqrt();
            let t = StudentsT::new(0.0, 1.0, mf - 2.0)
                .ok()
                .map(|d| d.inverse_cdf(0.975));
            (Some(se), t.map(|t| (slope - t * se, slope + t * se)))
        } else {
            (None, None)
        };
        Some(LinearFit {
            slope,
            intercept,
            points: m,
            stderr,
            ci,
        })
    }

    pub fn log_log(pairs: impl IntoIterator<Item = (usize, usize)>) -> Option<LinearFit> {
        let xy: Vec<(f64, f64)> = pairs
            .into_iter()
            .filter(|&(n, i)| n >= 2 && i > 0)
            .map(|(n, i)| ((n as f64).ln(), (i as f64).ln()))
            .collect();
        Self::fit(&xy)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentReport {
    pub rng: &'static str,
    pub k: usize,
    pub a_values: Vec<usize>,
    pub trials_per_a: usize,
    pub seed: u64,
    pub q_rule: String,
    pub budget: Option<u64>,
    /// The full standard configurations, `(N, I)`.
    pub base_fit: Option<LinearFit>,
    /// Balanced final configurations of valid trials, `(n, I)`.
    pub final_fit: Option<LinearFit>,
    /// `5/4 − 1/(2k)`, an asymptotic exponent that is compared, not
    /// asserted.
    pub asymptotic_slope: f64,
    pub total_trials: usize,
    pub invalid_trials: usize,
    pub uncertified_trials: usize,
    #[serde(skip)]
    pub rows: Vec<TrialReport>,
}

/// Runs the pipeline for every `A` and fits incidence exponents. Invalid
/// trials are counted and left out of the final fit.
pub fn exponent_report(
    a_values: &[usize],
    k: usize,
    trials: usize,
    seed: u64,
    budget: Option<u64>,
) -> Result<ExponentReport, LowerBoundError> {
    let mut rows = Vec::new();
    for &a in a_values {
        let params = SampleParams {
            budget,
            ..SampleParams::new(a, k, seed, trials)
        };
        params.validate()?;
        let base = erdos_config(a)?;
        let part: Vec<TrialReport> = (0..trials as u64)
            .into_par_iter()
            .map(|t| run_trial(&base, &params, t).map(|r| r.0))
            .collect::<Result<_, _>>()?;
        rows.extend(part);
    }
    let base_fit = LinearFit::log_log(
        a_values
            .iter()
            .map(|&a| (a.pow(3), erdos_incidence_formula(a as u64) as usize)),
    );
    let final_fit = LinearFit::log_log(
        rows.iter()
            .filter(|r| r.valid)
            .map(|r| (r.n, r.final_incidences)),
    );
    Ok(ExponentReport {
        rng: RNG_ALGORITHM,
        k,
        a_values: a_values.to_vec(),
        trials_per_a: trials,
        seed,
        q_rule: format!("q = N^(-{}/{})", k + 6, 9 * k + 6),
        budget,
        base_fit,
        final_fit,
        asymptotic_slope: 1.25 - 1.0 / (2.0 * k as f64),
        total_trials: rows.len(),
        invalid_trials: rows.iter().filter(|r| !r.valid).count(),
        uncertified_trials: rows.iter().filter(|r| r.valid && !r.certified).count(),
        rows,
    })
}

/// Per-trial CSV with the run parameters echoed as `#` header lines.
pub fn trials_csv(report: &ExponentReport) -> Result<String, LowerBoundError> {
    let mut out = String::new();
    out.push_str(&format!("# rng: {}\n", report.rng));
    out.push_str(&format!(
        "# k={} A={:?} trials={} seed={} {} budget={}\n",
        report.k,
        report.a_values,
        report.trials_per_a,
        report.seed,
        report.q_rule,
        report
            .budget
            .map_or("unlimited".to_string(), |b| b.to_string())
    ));
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &report.rows {
        w.serialize(r)?;
    }
    let body = w
        .into_inner()
        .map_err(|e| LowerBoundError::Io(e.into_error()))?;
    out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
    Ok(out)
}

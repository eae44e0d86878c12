//! Finite-N simulation of square random Vandermonde matrices
//! `X_N[i,j] = N^{-1/2} ζᵢ^j`, used to check the exact limits.

pub mod matrix;
mod plan;
pub mod sample;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use vdm_core::funcspace::PiecewisePoly;
use vdm_core::moments::{Letter, MomentEngine, Word};
use vdm_core::partitions::max_alternating_interval_partition;
use vdm_core::rational::{fmt_rational, Rational};

use matrix::CMatrix;
use plan::{Mats, Plan};
pub use sample::{sample, sample_trial, VandermondeSample};

/// Largest matrix size accepted.
pub const MAX_N: usize = 512;

#[derive(Debug, Error)]
pub enum McError {
    #[error("{0}")]
    Argument(String),
    #[error("{0}")]
    ResourceLimit(String),
    #[error(transparent)]
    Core(#[from] vdm_core::Error),
}

pub type Result<T> = std::result::Result<T, McError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Sample mean of a complex observable over independent trials.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimatorReport {
    pub word: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Diagonal probe position, absent for traces.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    pub mean_re: f64,
    pub mean_im: f64,
    /// Sample standard deviation over `√trials`.
    pub stderr: f64,
    pub analytic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub verdict: Option<Verdict>,
}

impl EstimatorReport {
    /// Compares against a limit value: passes when within
    /// `max(3·stderr, allowance)`.
    pub fn judge(mut self, analytic: f64, allowance: f64) -> Self {
        let tol = (3.0 * self.stderr).max(allowance);
        let dist = (self.mean_re - analytic).hypot(self.mean_im);
        self.analytic = Some(analytic);
        self.tolerance = Some(tol);
        self.verdict = Some(if dist <= tol { Verdict::Pass } else { Verdict::Fail });
        self
    }

    pub fn abs_mean(&self) -> f64 {
        self.mean_re.hypot(self.mean_im)
    }
}

struct Moments {
    mean_re: f64,
    mean_im: f64,
    stderr: f64,
}

/// Runs `f` on each trial in parallel and reduces serially in trial order.
fn run_trials<F>(n: usize, trials: usize, seed: u64, f: F) -> Result<Moments>
where
    F: Fn(&Mats) -> (f64, f64) + Sync,
{
    if trials < 2 {
        return Err(McError::Argument("at least 2 trials are required".into()));
    }
    let values: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|k| Ok(f(&Mats::new(&sample_trial(n, seed, k)?))))
        .collect::<Result<_>>()?;
    let m = trials as f64;
    let (sr, si) = values.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mean_re, mean_im) = (sr / m, si / m);
    let ss: f64 = values.iter().map(|(x, y)| (x - mean_re).powi(2) + (y - mean_im).powi(2)).sum();
    Ok(Moments { mean_re, mean_im, stderr: (ss / (m - 1.0)).sqrt() / m.sqrt() })
}

fn report(word: &Word, n: usize, trials: usize, seed: u64, t: Option<&Rational>, m: Moments) -> EstimatorReport {
    EstimatorReport {
        word: word.to_string(),
        n,
        trials,
        seed,
        t: t.map(fmt_rational),
        mean_re: m.mean_re,
        mean_im: m.mean_im,
        stderr: m.stderr,
        analytic: None,
        tolerance: None,
        verdict: None,
    }
}

/// Estimates `𝔼 tr(w(X_N))` with coefficients rendered as `D_N(b)`.
pub fn estimate_trace(word: &Word, n: usize, trials: usize, seed: u64) -> Result<EstimatorReport> {
    let plan = Plan::new(word, n)?;
    let m = run_trials(n, trials, seed, |mats| plan.normalized_trace(mats))?;
    Ok(report(word, n, trials, seed, None, m))
}

/// `h_N(t) = max(1, ⌈tN⌉)`, the 1-based diagonal index probed at `t`.
pub fn probe_index(n: usize, t: &Rational) -> Result<usize> {
    if *t < Rational::from_integer(0.into()) || *t > Rational::from_integer(1.into()) {
        return Err(McError::Argument(format!("t = {} lies outside [0,1]", fmt_rational(t))));
    }
    let h = (t * Rational::from_integer(n.into())).ceil().to_integer();
    Ok(h.to_usize().expect("bounded by N").max(1))
}

/// Estimates `𝔼 w(X_N)[h,h]` at `h = h_N(t)` for an alternating word.
pub fn estimate_diagonal(word: &Word, n: usize, t: &Rational, trials: usize, seed: u64) -> Result<EstimatorReport> {
    if !word.star_pattern().is_some_and(|p| p.is_alternating()) {
        return Err(McError::Argument(format!("diagonal probes need an alternating word, got {word}")));
    }
    let h = probe_index(n, t)?;
    let plan = Plan::new(word, n)?;
    let m = run_trials(n, trials, seed, |mats| plan.diagonal_entry(mats, h - 1))?;
    Ok(report(word, n, trials, seed, Some(t), m))
}

/// A product `∏ (w_I − c_I)` of words with their centering coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CenteredProduct {
    blocks: Vec<(Word, PiecewisePoly)>,
}

impl CenteredProduct {
    pub fn from_blocks(blocks: Vec<(Word, PiecewisePoly)>) -> Self {
        CenteredProduct { blocks }
    }

    /// Splits `word` into maximal alternating runs, each run carrying the
    /// coefficient before each of its letters, centered by its exact
    /// expectation.
    pub fn from_word(word: &Word, engine: &MomentEngine) -> Result<Self> {
        let Some(pattern) = word.star_pattern() else {
            return Ok(CenteredProduct { blocks: Vec::new() });
        };
        let sigma = max_alternating_interval_partition(&pattern);
        let ends: Vec<usize> = sigma.blocks().iter().map(|b| *b.last().unwrap()).collect();
        let mut blocks = Vec::new();
        let mut current = Vec::new();
        let mut seen = 0;
        for l in word.letters() {
            current.push(l.clone());
            if !matches!(l, Letter::Coeff(_)) {
                seen += 1;
                if ends.contains(&seen) {
                    blocks.push(std::mem::take(&mut current));
                }
            }
        }
        if let Some(last) = blocks.last_mut() {
            last.extend(current);
        }
        let blocks = blocks
            .into_iter()
            .map(|letters| {
                let w = Word::new(letters);
                let c = engine.expectation(&w)?.value;
                Ok((w, c))
            })
            .collect::<Result<_>>()?;
        Ok(CenteredProduct { blocks })
    }

    pub fn blocks(&self) -> &[(Word, PiecewisePoly)] {
        &self.blocks
    }
}

impl std::fmt::Display for CenteredProduct {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (w, c) in &self.blocks {
            write!(f, "({w} - [{c}])")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub mean_re: f64,
    pub mean_im: f64,
    pub abs_mean: f64,
    pub stderr: f64,
    /// `|mean| + 3·stderr`.
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub product: String,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<DecayRow>,
    /// Least-squares slope of `log bound` against `log N`.
    pub slope: Option<f64>,
    /// The same fit on `log |mean|` alone.
    pub slope_abs_mean: Option<f64>,
}

/// Least-squares slope of `log y` on `log x`; `None` if any `y ≤ 0` or
/// fewer than two points.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `|𝔼 tr ∏ (w_I − D_N(c_I))|` across matrix sizes.
pub fn centered_decay(cp: &CenteredProduct, ns: &[usize], trials: usize, seed: u64) -> Result<DecayReport> {
    let mut rows = Vec::new();
    for &n in ns {
        let row = if cp.blocks.is_empty() {
            DecayRow { n, mean_re: 0.0, mean_im: 0.0, abs_mean: 0.0, stderr: 0.0, bound: 0.0 }
        } else {
            let plans: Vec<(Plan, Vec<f64>)> = cp
                .blocks
                .iter()
                .map(|(w, c)| Ok((Plan::new(w, n)?, plan::discretize(c, n)?)))
                .collect::<Result<_>>()?;
            let m = run_trials(n, trials, seed, |mats| {
                let ms: Vec<CMatrix> = plans
                    .iter()
                    .map(|(p, c)| {
                        let mut m = p.dense(mats);
                        m.sub_diag(c);
                        m
                    })
                    .collect();
                plan::normalized_trace_of_chain(&ms)
            })?;
            let abs_mean = m.mean_re.hypot(m.mean_im);
            DecayRow { n, mean_re: m.mean_re, mean_im: m.mean_im, abs_mean, stderr: m.stderr, bound: abs_mean + 3.0 * m.stderr }
        };
        rows.push(row);
    }
    let slope = loglog_slope(&rows.iter().map(|r| (r.n as f64, r.bound)).collect::<Vec<_>>());
    let slope_abs_mean = loglog_slope(&rows.iter().map(|r| (r.n as f64, r.abs_mean)).collect::<Vec<_>>());
    Ok(DecayReport { product: cp.to_string(), trials, seed, rows, slope, slope_abs_mean })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    #[serde(rename = "N")]
    pub n: usize,
    /// `𝔼 Tr((X*X)^p) / N`.
    pub ratio: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub p: u32,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<GrowthRow>,
    /// Whether some step in `N` increases the ratio by more than three
    /// combined standard errors.
    pub grows: bool,
}

pub const MAX_GROWTH_POWER: u32 = 6;

pub fn growth_check(p: u32, ns: &[usize], trials: usize, seed: u64) -> Result<GrowthReport> {
    if p == 0 || p > MAX_GROWTH_POWER {
        return Err(McError::Argument(format!("power must be in 1..={MAX_GROWTH_POWER}, got {p}")));
    }
    let word = Word::new((0..p).flat_map(|_| [Letter::XStar, Letter::X]).collect());
    let rows: Vec<GrowthRow> = ns
        .iter()
        .map(|&n| {
            let r = estimate_trace(&word, n, trials, seed)?;
            Ok(GrowthRow { n, ratio: r.mean_re, stderr: r.stderr })
        })
        .collect::<Result<_>>()?;
    let grows = rows
        .windows(2)
        .any(|w| w[1].ratio - w[0].ratio > 3.0 * w[0].stderr.hypot(w[1].stderr));
    Ok(GrowthReport { p, trials, seed, rows, grows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use vdm_core::rational::q;
    use vdm_core::syntax::parse_word;

    #[test]
    fn probe_indices() {
        assert_eq!(probe_index(10, &q(0, 1)).unwrap(), 1);
        assert_eq!(probe_index(10, &q(1, 2)).unwrap(), 5);
        assert_eq!(probe_index(10, &q(51, 100)).unwrap(), 6);
        assert_eq!(probe_index(10, &q(1, 1)).unwrap(), 10);
        assert!(probe_index(10, &q(3, 2)).is_err());
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = [25.0, 50.0, 100.0].iter().map(|&n: &f64| (n, 3.0 / n.sqrt())).collect();
        assert!((loglog_slope(&pts).unwrap() + 0.5).abs() < 1e-12);
        assert_eq!(loglog_slope(&[(1.0, 0.0), (2.0, 1.0)]), None);
    }

    #[test]
    fn first_moment_is_exact() {
        let r = estimate_trace(&parse_word("X* X").unwrap(), 30, 4, 1).unwrap();
        assert!((r.mean_re - 1.0).abs() < 1e-12 && r.stderr < 1e-12);
        let r = estimate_diagonal(&parse_word("X* X").unwrap(), 30, &q(1, 3), 4, 1).unwrap();
        assert!((r.mean_re - 1.0).abs() < 1e-12);
        assert!(estimate_trace(&parse_word("X").unwrap(), 30, 1, 1).is_err());
        assert!(estimate_diagonal(&parse_word("X X").unwrap(), 30, &q(1, 3), 4, 1).is_err());
    }

    #[test]
    fn centered_blocks_follow_runs() {
        let e = MomentEngine::default();
        let cp = CenteredProduct::from_word(&parse_word("[t] X [2] X X* [t] X*").unwrap(), &e).unwrap();
        let words: Vec<String> = cp.blocks().iter().map(|(w, _)| w.to_string()).collect();
        assert_eq!(words, ["[t] X", "[2] X X*", "[t] X*"]);
        assert_eq!(cp.blocks()[1].1, PiecewisePoly::constant(q(2, 1)));
        let empty = CenteredProduct::from_blocks(Vec::new());
        let r = centered_decay(&empty, &[10, 20], 2, 0).unwrap();
        assert!(r.rows.iter().all(|row| row.abs_mean == 0.0));
    }
}

//! Exact repetition analysis: periods, runs, maximum exponent and
//! power-freeness verdicts.
//!
//! Only repetitions of exponent at least 2 are materialized. A run of
//! length `L` and period `p` contains powers of every exponent `m/p <= L/p`
//! with that period, so a word is `alpha`-power-free (for `alpha > 2`)
//! exactly when no run reaches `L/p >= alpha`.

mod naive;
pub(crate) mod runs;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::word::Word;

pub use naive::{naive_max_exponent_bounded, naive_power_segments, NAIVE_DEFAULT_BOUND};

/// A maximal repetition `w[start .. start + length)` with minimal period
/// `period` and `length >= 2 * period`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Run {
    pub start: u64,
    pub period: u64,
    pub length: u64,
}

impl Run {
    pub fn new(start: u64, period: u64, length: u64) -> Self {
        Run { start, period, length }
    }

    pub fn end(&self) -> u64 {
        self.start + self.length
    }

    pub fn exponent(&self) -> Rational {
        Rational::ratio(self.length, self.period).expect("run exponent fits in 64 bits")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Free,
    Violation(Run),
}

impl Verdict {
    pub fn is_free(&self) -> bool {
        matches!(self, Verdict::Free)
    }

    pub fn witness(&self) -> Option<&Run> {
        match self {
            Verdict::Free => None,
            Verdict::Violation(run) => Some(run),
        }
    }
}

/// `p` is a period of `w`: `w[j] = w[j + p]` for every valid `j`.
pub fn has_period(w: &Word, p: u64) -> bool {
    assert!(p >= 1, "period must be positive");
    if p >= w.len() {
        return true;
    }
    let n = w.len() - p;
    let mut j = 0;
    while j < n {
        let k = (n - j).min(64);
        if w.read_bits(j, k) != w.read_bits(j + p, k) {
            return false;
        }
        j += k;
    }
    true
}

fn to_run(raw: runs::RawRun) -> Run {
    Run {
        start: raw.start as u64,
        period: raw.period as u64,
        length: (raw.end - raw.start) as u64,
    }
}

/// Runs of a word given one letter per byte. Any byte alphabet works.
pub fn runs_of_letters(letters: &[u8]) -> Vec<Run> {
    runs::runs(letters).into_iter().map(to_run).collect()
}

/// Every maximal repetition of exponent at least 2, with minimal period,
/// sorted by start and then period.
pub fn maximal_repetitions(w: &Word) -> Vec<Run> {
    runs_of_letters(&w.to_letters())
}

/// The run of largest exponent; ties go to the smallest start, then the
/// smallest period.
pub fn max_exponent_run(runs: &[Run]) -> Option<Run> {
    let mut best: Option<Run> = None;
    for r in runs {
        let better = match best {
            None => true,
            // r.length / r.period > b.length / b.period
            Some(b) => (r.length as u128) * (b.period as u128) > (b.length as u128) * (r.period as u128),
        };
        if better {
            best = Some(*r);
        }
    }
    best
}

/// Largest exponent `>= 2` of a factor of `w`, or `None` when `w` has no
/// square.
pub fn max_exponent(w: &Word) -> Option<Rational> {
    max_exponent_run(&maximal_repetitions(w)).map(|r| r.exponent())
}

fn require_alpha_above_two(alpha: Rational) -> Result<()> {
    if alpha <= Rational::from_integer(2) {
        return Err(Error::precondition(format!("alpha must exceed 2, got {alpha}")));
    }
    Ok(())
}

/// Verdict for a precomputed run list.
pub fn verdict_from_runs(runs: &[Run], alpha: Rational) -> Result<Verdict> {
    require_alpha_above_two(alpha)?;
    Ok(runs
        .iter()
        .find(|r| alpha.reached_by(r.length, r.period))
        .map_or(Verdict::Free, |r| Verdict::Violation(*r)))
}

/// Whether `w` avoids every power of exponent `>= alpha`. A violation
/// carries the first offending run in `(start, period)` order.
pub fn is_power_free(w: &Word, alpha: Rational) -> Result<Verdict> {
    require_alpha_above_two(alpha)?;
    verdict_from_runs(&maximal_repetitions(w), alpha)
}

/// The first maximal factor with period exactly `p` whose exponent reaches
/// `beta`. The returned run carries `period = p` even when `p` is a
/// multiple of the factor's minimal period.
pub fn find_power_with_period(w: &Word, beta: Rational, p: u64) -> Result<Option<Run>> {
    if beta < Rational::from_integer(2) {
        return Err(Error::precondition(format!("beta must be at least 2, got {beta}")));
    }
    if p == 0 {
        return Err(Error::precondition("period must be positive"));
    }
    let n = w.len();
    if p >= n {
        return Ok(None);
    }
    let mut j = 0;
    while j + p < n {
        if w.get(j) != w.get(j + p) {
            j += 1;
            continue;
        }
        let from = j;
        while j + p < n && w.get(j) == w.get(j + p) {
            j += 1;
        }
        let length = j + p - from;
        if beta.reached_by(length, p) {
            return Ok(Some(Run { start: from, period: p, length }));
        }
    }
    Ok(None)
}

/// Quadratic oracle for [`max_exponent`], refusing words longer than
/// [`NAIVE_DEFAULT_BOUND`].
pub fn naive_max_exponent(w: &Word) -> Result<Option<Rational>> {
    naive_max_exponent_bounded(&w.to_letters(), NAIVE_DEFAULT_BOUND)
}

/// A run as it appears in reports, with its exponent spelled out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub start: u64,
    pub period: u64,
    pub length: u64,
    pub exponent: Rational,
}

impl From<&Run> for RunRecord {
    fn from(r: &Run) -> Self {
        RunRecord { start: r.start, period: r.period, length: r.length, exponent: r.exponent() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub length: u64,
    pub runs: Vec<RunRecord>,
    pub max_exponent: Option<Rational>,
    pub max_exponent_run: Option<RunRecord>,
    pub alpha: Option<Rational>,
    /// `"free"` or `"violation"`; absent without `alpha`.
    pub verdict: Option<String>,
    pub witness: Option<RunRecord>,
}

impl AnalysisReport {
    pub fn is_violation(&self) -> bool {
        self.witness.is_some()
    }
}

pub fn analyze(w: &Word, alpha: Option<Rational>) -> Result<AnalysisReport> {
    let runs = maximal_repetitions(w);
    let best = max_exponent_run(&runs);
    let verdict = alpha.map(|a| verdict_from_runs(&runs, a)).transpose()?;
    Ok(AnalysisReport {
        length: w.len(),
        runs: runs.iter().map(RunRecord::from).collect(),
        max_exponent: best.map(|r| r.exponent()),
        max_exponent_run: best.as_ref().map(RunRecord::from),
        alpha,
        verdict: verdict.as_ref().map(|v| if v.is_free() { "free" } else { "violation" }.to_string()),
        witness: verdict.as_ref().and_then(|v| v.witness()).map(RunRecord::from),
    })
}

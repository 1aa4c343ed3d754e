//! Quadratic reference implementations, kept separate from the runs code so
//! they can serve as an oracle for it.

use super::Run;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Default length limit for the quadratic oracles.
pub const NAIVE_DEFAULT_BOUND: u64 = 4096;

fn check_bound(len: usize, bound: u64) -> Result<()> {
    if len as u64 > bound {
        return Err(Error::size(format!(
            "naive analysis refused: word length {len} exceeds bound {bound}"
        )));
    }
    Ok(())
}

/// For every period `p` and every left-maximal start, the longest factor
/// with period `p` starting there. Calls `f(start, period, length)` for
/// each one whose length is at least `2p`.
fn for_each_periodic_factor(s: &[u8], mut f: impl FnMut(usize, usize, usize)) {
    let n = s.len();
    for p in 1..=n / 2 {
        for start in 0..n.saturating_sub(p) {
            if start > 0 && s[start - 1] == s[start - 1 + p] {
                continue;
            }
            let mut len = p;
            while start + len < n && s[start + len] == s[start + len - p] {
                len += 1;
            }
            if len >= 2 * p {
                f(start, p, len);
            }
        }
    }
}

pub fn naive_max_exponent_bounded(letters: &[u8], bound: u64) -> Result<Option<Rational>> {
    check_bound(letters.len(), bound)?;
    let mut best: Option<(usize, usize)> = None;
    for_each_periodic_factor(letters, |_, p, len| {
        // len/p > best_len/best_p
        if best.is_none_or(|(bl, bp)| len * bp > bl * p) {
            best = Some((len, p));
        }
    });
    best.map(|(len, p)| Rational::ratio(len as u64, p as u64)).transpose()
}

/// Every maximal factor with some period `p` whose exponent reaches
/// `alpha`, sorted by `(start, period)`. The period is not necessarily
/// minimal: a factor is listed once for each period it reaches `alpha` with.
pub fn naive_power_segments(letters: &[u8], alpha: Rational, bound: u64) -> Result<Vec<Run>> {
    check_bound(letters.len(), bound)?;
    let mut out = Vec::new();
    for_each_periodic_factor(letters, |start, p, len| {
        if alpha.reached_by(len as u64, p as u64) {
            out.push(Run { start: start as u64, period: p as u64, length: len as u64 });
        }
    });
    out.sort_by_key(|r| (r.start, r.period));
    Ok(out)
}

//! Words avoiding `alpha`-powers while containing powers arbitrarily close
//! to `alpha`.
//!
//! An obtainable exponent is `beta = r - t/2^s` where `s >= 3`,
//! `r = ceil(alpha)` and `mu^s(0)` has an occurrence of `00` at position
//! `t`. Each one defines a map
//!
//! ```text
//! phi(w) = delete_prefix(mu^s(0^r w), t)
//! ```
//!
//! defined on words `w` with `00w` a factor of a Thue-Morse image. Each
//! image has the form `00v` with `00v` again such a factor, and the next map
//! takes that `v`. Nesting the maps for a sequence
//! `beta_1 <= beta_2 <= ... < alpha`, starting from the empty word, gives
//! words `w_1, w_2, ...`, each a prefix of the next. Every `w_n` is `alpha`-power-free and contains a
//! `beta_i`-power of period `2^(s_1 + ... + s_i)` for each `i <= n`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::word::Word;

/// Largest constructed word, in letters, unless a caller says otherwise.
pub const DEFAULT_BUDGET: u64 = 1 << 28;

/// Largest `s` the exact arithmetic supports.
pub const MAX_S: u32 = 62;

/// Letter `i` of the Thue-Morse word; `mu^s(0)` is its prefix of length `2^s`.
pub fn thue_morse_letter(i: u64) -> u8 {
    (i.count_ones() & 1) as u8
}

fn require_alpha(alpha: Rational) -> Result<()> {
    if alpha <= Rational::from_integer(2) {
        return Err(Error::precondition(format!("alpha must exceed 2, got {alpha}")));
    }
    Ok(())
}

fn require_s(s: u32) -> Result<()> {
    if s < 3 {
        return Err(Error::precondition(format!("s must be at least 3, got {s}")));
    }
    if s > MAX_S {
        return Err(Error::size(format!("s = {s} exceeds the supported maximum {MAX_S}")));
    }
    Ok(())
}

/// One obtainable exponent `beta = r - t/2^s` together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ObtainableParams {
    r: u64,
    s: u32,
    t: u64,
    beta: Rational,
}

impl ObtainableParams {
    /// Validates `(s, t)` against `alpha`, with `r = ceil(alpha)`.
    pub fn new(alpha: Rational, s: u32, t: u64) -> Result<Self> {
        require_alpha(alpha)?;
        require_s(s)?;
        let r = alpha.ceil() as u64;
        let size = 1u64 << s;
        if t + 1 >= size || thue_morse_letter(t) != 0 || thue_morse_letter(t + 1) != 0 {
            return Err(Error::precondition(format!("mu^{s}(0) has no 00 at position {t}")));
        }
        let beta = beta_of(r, s, t)?;
        if beta <= Rational::from_integer(2) || beta >= alpha {
            return Err(Error::precondition(format!(
                "beta = {beta} from (r={r}, s={s}, t={t}) is not strictly between 2 and {alpha}"
            )));
        }
        Ok(ObtainableParams { r, s, t, beta })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn beta(&self) -> Rational {
        self.beta
    }

    /// `2^s`, the period a prefix power of the image has.
    pub fn scale(&self) -> u64 {
        1u64 << self.s
    }
}

fn beta_of(r: u64, s: u32, t: u64) -> Result<Rational> {
    let num = (r as i128) << s;
    let num = i64::try_from(num - t as i128)
        .map_err(|_| Error::size(format!("beta for r={r}, s={s} exceeds 64-bit arithmetic")))?;
    Rational::try_new(num, 1i64 << s)
}

/// The largest obtainable `beta < alpha` for this `s`, or `None` when no
/// occurrence of `00` in `mu^s(0)` lies strictly inside
/// `((r - alpha) 2^s, (r - 2) 2^s)`.
pub fn find_obtainable(alpha: Rational, s: u32) -> Result<Option<ObtainableParams>> {
    require_alpha(alpha)?;
    require_s(s)?;
    let r = alpha.ceil() as i128;
    let (a, b) = (alpha.numer() as i128, alpha.denom() as i128);
    let size = 1i128 << s;
    // smallest t with t * b > (r b - a) 2^s
    let lower = ((r * b - a) * size).div_euclid(b) + 1;
    // t < (r - 2) 2^s, and t + 1 < 2^s for the pair to fit in mu^s(0)
    let upper = ((r - 2) * size).min(size - 1);
    let mut t = lower.max(0);
    while t < upper {
        let tt = t as u64;
        if thue_morse_letter(tt) == 0 && thue_morse_letter(tt + 1) == 0 {
            return ObtainableParams::new(alpha, s, tt).map(Some);
        }
        t += 1;
    }
    Ok(None)
}

/// Obtainable exponents for `alpha` with strictly increasing `s` and
/// non-decreasing `beta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Schedule {
    target_alpha: Rational,
    params: Vec<ObtainableParams>,
}

impl Schedule {
    /// Checks the ordering invariants of a hand-made schedule.
    pub fn new(target_alpha: Rational, params: Vec<ObtainableParams>) -> Result<Self> {
        require_alpha(target_alpha)?;
        for p in &params {
            // Re-derive to make sure each entry belongs to this alpha.
            let q = ObtainableParams::new(target_alpha, p.s, p.t)?;
            if q != *p {
                return Err(Error::precondition(format!("entry {p:?} does not match alpha {target_alpha}")));
            }
        }
        for pair in params.windows(2) {
            if pair[1].s <= pair[0].s {
                return Err(Error::precondition("s must be strictly increasing"));
            }
            if pair[1].beta < pair[0].beta {
                return Err(Error::precondition("beta must be non-decreasing"));
            }
        }
        Ok(Schedule { target_alpha, params })
    }

    pub fn target_alpha(&self) -> Rational {
        self.target_alpha
    }

    pub fn params(&self) -> &[ObtainableParams] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// The first `n` entries.
    pub fn truncated(&self, n: usize) -> Schedule {
        Schedule {
            target_alpha: self.target_alpha,
            params: self.params[..n.min(self.params.len())].to_vec(),
        }
    }

    /// Appends the next entry of the greedy policy.
    pub fn extend_greedy(&mut self) -> Result<()> {
        self.extend_greedy_from(3)
    }

    /// Tries `s = max(s_min, last s + 1), ...` until [`find_obtainable`]
    /// yields an entry whose `beta` does not fall below the last one.
    fn extend_greedy_from(&mut self, s_min: u32) -> Result<()> {
        let mut s = self.params.last().map_or(s_min, |p| (p.s + 1).max(s_min));
        let floor = self.params.last().map(|p| p.beta);
        loop {
            if s > MAX_S {
                return Err(Error::size(format!(
                    "no admissible entry for alpha = {} with s <= {MAX_S}",
                    self.target_alpha
                )));
            }
            if let Some(p) = find_obtainable(self.target_alpha, s)? {
                if floor.is_none_or(|f| p.beta >= f) {
                    self.params.push(p);
                    return Ok(());
                }
            }
            s += 1;
        }
    }

    /// Plain-text table, one entry per line: `level r s t beta_num beta_den`.
    pub fn to_table(&self) -> String {
        let mut out = format!("# alpha {}\n# level r s t beta_num beta_den\n", self.target_alpha);
        for (i, p) in self.params.iter().enumerate() {
            let _ = writeln!(
                out,
                "{} {} {} {} {} {}",
                i + 1,
                p.r,
                p.s,
                p.t,
                p.beta.numer(),
                p.beta.denom()
            );
        }
        out
    }

    /// Reads [`Schedule::to_table`] output back, re-validating every entry.
    pub fn from_table(text: &str) -> Result<Schedule> {
        let mut alpha = None;
        let mut params = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# alpha ") {
                alpha = Some(rest.trim().parse::<Rational>()?);
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let alpha = alpha.ok_or_else(|| Error::format("schedule table lacks an `# alpha` line"))?;
            let fields: Vec<u64> = line
                .split_whitespace()
                .map(|f| f.parse::<u64>().map_err(|_| Error::format(format!("bad field `{f}`"))))
                .collect::<Result<_>>()?;
            let [_, r, s, t, num, den] = fields[..] else {
                return Err(Error::format(format!("expected 6 fields in `{line}`")));
            };
            let s = u32::try_from(s).map_err(|_| Error::format(format!("bad s in `{line}`")))?;
            let p = ObtainableParams::new(alpha, s, t)?;
            let beta = Rational::try_new(num as i64, den as i64)?;
            if p.r != r || p.beta != beta {
                return Err(Error::format(format!("inconsistent entry `{line}`")));
            }
            params.push(p);
        }
        let alpha = alpha.ok_or_else(|| Error::format("schedule table lacks an `# alpha` line"))?;
        Schedule::new(alpha, params)
    }
}

/// Greedy schedule of `n` entries: for each `s` from `s_start` (3 when
/// `None`) upward take [`find_obtainable`], skipping `s` values without a
/// result or whose `beta` would fall below the previous entry.
pub fn build_schedule(alpha: Rational, n: usize, s_start: Option<u32>) -> Result<Schedule> {
    require_alpha(alpha)?;
    if n == 0 {
        return Err(Error::precondition("a schedule needs at least one entry"));
    }
    let start = s_start.unwrap_or(3);
    if start < 3 {
        return Err(Error::precondition(format!("s search must start at 3 or above, got {start}")));
    }
    let mut schedule = Schedule { target_alpha: alpha, params: Vec::with_capacity(n) };
    schedule.extend_greedy_from(start)?;
    while schedule.len() < n {
        schedule.extend_greedy()?;
    }
    Ok(schedule)
}

/// `delete_prefix(mu^s(0^r w), t)`.
pub fn phi(params: &ObtainableParams, w: &Word) -> Result<Word> {
    Word::zeros(params.r).concat(w).mu_pow(params.s)?.delete_prefix(params.t)
}

/// A power the construction guarantees at a given nesting level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedWitness {
    pub level: usize,
    pub period: u64,
    pub min_length: u64,
    pub beta: Rational,
}

/// Image lengths after applying `phi_k, ..., phi_n`, for `k = n` down to
/// 1, each paired with its level. The last element is `|w_n|`.
fn level_lengths(params: &[ObtainableParams]) -> Result<Vec<(usize, u64)>> {
    let mut image: u64 = 0;
    let mut out = Vec::with_capacity(params.len());
    for (idx, p) in params.iter().enumerate().rev() {
        let arg = image.saturating_sub(2);
        image = p
            .r
            .checked_add(arg)
            .and_then(|x| x.checked_mul(p.scale()))
            .map(|x| x - p.t)
            .ok_or_else(|| Error::size(format!("length at level {} overflows 64 bits", idx + 1)))?;
        out.push((idx + 1, image));
    }
    Ok(out)
}

/// The word `v` with `image = 00 v`, which is what the next map consumes.
fn strip_leading_00(image: &Word) -> Result<Word> {
    if image.len() < 2 || image.get(0) != 0 || image.get(1) != 0 {
        return Err(Error::precondition("image does not begin with 00"));
    }
    image.delete_prefix(2)
}

/// `|w_n|` without building it.
pub fn predicted_length(schedule: &Schedule) -> Result<u64> {
    Ok(level_lengths(&schedule.params)?.last().map_or(0, |&(_, l)| l))
}

pub fn predicted_witnesses(schedule: &Schedule) -> Result<Vec<PredictedWitness>> {
    let mut exp: u32 = 0;
    let mut out = Vec::with_capacity(schedule.len());
    for (idx, p) in schedule.params.iter().enumerate() {
        exp += p.s;
        let level = idx + 1;
        if exp > MAX_S {
            return Err(Error::size(format!("witness period 2^{exp} at level {level} overflows")));
        }
        let period = 1u64 << exp;
        let min_length = u64::try_from(p.beta.min_length_for_period(period))
            .map_err(|_| Error::size(format!("witness length at level {level} overflows")))?;
        out.push(PredictedWitness { level, period, min_length, beta: p.beta });
    }
    Ok(out)
}

/// `w_n` for the whole schedule, with the default memory budget.
pub fn build_word(schedule: &Schedule) -> Result<(Word, Vec<PredictedWitness>)> {
    build_word_within(schedule, DEFAULT_BUDGET)
}

/// `w_n`, refusing to build any level longer than `budget` letters.
pub fn build_word_within(schedule: &Schedule, budget: u64) -> Result<(Word, Vec<PredictedWitness>)> {
    if schedule.is_empty() {
        return Err(Error::precondition("cannot build a word from an empty schedule"));
    }
    for (level, len) in level_lengths(&schedule.params)? {
        if len > budget {
            return Err(Error::size(format!(
                "level {level} would have {len} letters, over the budget of {budget}"
            )));
        }
    }
    let mut w = Word::new();
    for p in schedule.params.iter().rev() {
        let arg = if w.is_empty() { w } else { strip_leading_00(&w)? };
        w = phi(p, &arg)?;
    }
    Ok((w, predicted_witnesses(schedule)?))
}

/// The first `m` letters of `w_n`; only the letters of each inner level
/// that reach the output are built.
fn nested_prefix(params: &[ObtainableParams], m: u64) -> Result<Word> {
    let Some((p, inner)) = params.split_first() else {
        return Ok(Word::new());
    };
    let needed = (p.t + m).div_ceil(p.scale());
    let inner_image_len = level_lengths(inner)?.last().map_or(0, |&(_, l)| l);
    let arg = if inner_image_len == 0 {
        Word::new()
    } else {
        let arg_needed = needed.saturating_sub(p.r).min(inner_image_len - 2);
        nested_prefix(inner, arg_needed + 2)?.delete_prefix(2)?
    };
    let image = Word::zeros(p.r).concat(&arg).mu_pow(p.s)?;
    let end = (p.t + m).min(image.len());
    Ok(image.subword(p.t..end))
}

/// The shortest greedy schedule whose word has at least `target_len` letters.
pub fn schedule_covering(alpha: Rational, target_len: u64) -> Result<Schedule> {
    require_alpha(alpha)?;
    let mut schedule = Schedule { target_alpha: alpha, params: Vec::new() };
    while schedule.is_empty() || predicted_length(&schedule)? < target_len {
        schedule.extend_greedy()?;
    }
    Ok(schedule)
}

/// Length-`target_len` prefix of the limit word, default budget.
pub fn word_prefix(alpha: Rational, target_len: u64) -> Result<Word> {
    word_prefix_within(alpha, target_len, DEFAULT_BUDGET)
}

pub fn word_prefix_within(alpha: Rational, target_len: u64, budget: u64) -> Result<Word> {
    require_alpha(alpha)?;
    if target_len == 0 {
        return Err(Error::precondition("target length must be at least 1"));
    }
    if target_len > budget {
        return Err(Error::size(format!(
            "target length {target_len} exceeds the budget of {budget} letters"
        )));
    }
    let schedule = schedule_covering(alpha, target_len)?;
    nested_prefix(&schedule.params, target_len)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn thue_morse_letters_match_mu_pow() {
        let t = Word::mu_pow_letter(0, 10).unwrap();
        for i in 0..t.len() {
            assert_eq!(thue_morse_letter(i), t.get(i));
        }
    }

    #[test]
    fn obtainable_examples() {
        let p = find_obtainable(q(7, 3), 5).unwrap().unwrap();
        assert_eq!((p.r(), p.s(), p.t(), p.beta()), (3, 5, 23, q(73, 32)));
        assert_eq!(find_obtainable(q(7, 3), 3).unwrap(), None);
        assert!(matches!(find_obtainable(q(2, 1), 5), Err(Error::Precondition(_))));
        assert!(matches!(find_obtainable(q(7, 3), 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn integer_alpha_window_is_open_at_zero() {
        let p = find_obtainable(q(3, 1), 3).unwrap().unwrap();
        assert_eq!((p.r(), p.t(), p.beta()), (3, 5, q(19, 8)));
    }

    #[test]
    fn params_validation() {
        assert!(ObtainableParams::new(q(7, 3), 5, 23).is_ok());
        // 24 is not a 00 position in mu^5(0)
        assert!(ObtainableParams::new(q(7, 3), 5, 24).is_err());
        // beta = 3 - 5/32 >= 7/3
        assert!(ObtainableParams::new(q(7, 3), 5, 5).is_err());
    }

    #[test]
    fn schedule_examples() {
        let s = build_schedule(q(7, 3), 2, None).unwrap();
        let got: Vec<_> = s.params().iter().map(|p| (p.r(), p.s(), p.t(), p.beta())).collect();
        assert_eq!(got, vec![(3, 5, 23, q(73, 32)), (3, 6, 45, q(147, 64))]);
        let s = build_schedule(q(3, 1), 1, None).unwrap();
        assert_eq!(s.params()[0].r(), 3);
        assert!(s.params()[0].beta() < q(3, 1));
        assert!(build_schedule(q(7, 3), 0, None).is_err());
        assert!(build_schedule(q(7, 3), 1, Some(2)).is_err());
    }

    #[test]
    fn schedule_table_round_trip() {
        let s = build_schedule(q(21, 10), 3, None).unwrap();
        let text = s.to_table();
        assert!(text.contains("1 3 5 29 67 32"));
        assert_eq!(Schedule::from_table(&text).unwrap(), s);
        assert!(Schedule::from_table("# alpha 7/3\n1 3 5 24 73 32\n").is_err());
        assert!(Schedule::from_table("1 3 5 23 73 32\n").is_err());
    }

    #[test]
    fn schedule_new_checks_order() {
        let a = q(7, 3);
        let p5 = ObtainableParams::new(a, 5, 23).unwrap();
        let p6 = ObtainableParams::new(a, 6, 45).unwrap();
        assert!(Schedule::new(a, vec![p5, p6]).is_ok());
        assert!(Schedule::new(a, vec![p6, p5]).is_err());
        assert!(Schedule::new(q(21, 10), vec![p5]).is_err());
    }

    #[test]
    fn phi_of_empty_word() {
        let p = ObtainableParams::new(q(7, 3), 5, 23).unwrap();
        let w = phi(&p, &Word::new()).unwrap();
        assert_eq!(w.len(), 73);
        assert!(crate::repetition::has_period(&w, 32));
        assert_eq!(w.get(0), 0);
        assert_eq!(w.get(1), 0);
    }

    #[test]
    fn build_word_examples() {
        let s = build_schedule(q(7, 3), 2, None).unwrap();
        let (w1, wit1) = build_word(&s.truncated(1)).unwrap();
        assert_eq!(w1.len(), 73);
        assert_eq!(wit1, vec![PredictedWitness { level: 1, period: 32, min_length: 73, beta: q(73, 32) }]);
        let (w2, wit2) = build_word(&s).unwrap();
        assert_eq!(w2.len(), 4713);
        assert_eq!((wit2[1].period, wit2[1].min_length), (2048, 4704));
        assert!(w1.is_prefix_of(&w2));
        assert!(build_word(&s.truncated(0)).is_err());
    }

    #[test]
    fn budget_error_names_level() {
        let s = build_schedule(q(7, 3), 2, None).unwrap();
        let err = build_word_within(&s, 1000).unwrap_err();
        assert!(matches!(&err, Error::Size(m) if m.contains("level 1")), "{err}");
    }

    #[test]
    fn predicted_length_examples() {
        let s = build_schedule(q(7, 3), 2, None).unwrap();
        assert_eq!(predicted_length(&s.truncated(1)).unwrap(), 73);
        assert_eq!(predicted_length(&s).unwrap(), 4713);
        assert_eq!(predicted_length(&s.truncated(0)).unwrap(), 0);
    }

    #[test]
    fn word_prefix_examples() {
        let s = build_schedule(q(7, 3), 1, None).unwrap();
        let (w1, _) = build_word(&s).unwrap();
        assert_eq!(word_prefix(q(7, 3), 73).unwrap(), w1);
        assert_eq!(word_prefix(q(7, 3), 10).unwrap(), w1.subword(0..10));
        assert!(word_prefix(q(7, 3), 0).is_err());
        assert!(matches!(word_prefix_within(q(7, 3), 100, 99), Err(Error::Size(_))));
    }

    #[test]
    fn word_prefix_matches_full_build() {
        let s = build_schedule(q(5, 2), 3, None).unwrap();
        let (w3, _) = build_word(&s).unwrap();
        for m in [1, 19, 20, 315, 316, 5000, w3.len()] {
            assert_eq!(word_prefix(q(5, 2), m).unwrap(), w3.subword(0..m), "m = {m}");
        }
    }
}

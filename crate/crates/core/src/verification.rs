//! Executable checks of the facts the construction rests on.
//!
//! Each check runs over a finite, reproducible family of instances and
//! returns a [`CheckReport`] listing counterexamples. Randomized checks take
//! a seed; the same seed always gives the same report.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::construction::{self, ObtainableParams, PredictedWitness, Schedule};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::repetition::{self, naive_power_segments, runs_of_letters, Run};
use crate::word::Word;

/// Counterexamples kept verbatim per report; the rest are only counted.
const MAX_RECORDED: usize = 100;

/// Length limit for the quadratic enumerations inside the checks.
const NAIVE_LIMIT: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub input: String,
    pub observed: String,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check_name: String,
    pub instances_tested: u64,
    pub failure_count: u64,
    pub failures: Vec<Counterexample>,
}

impl CheckReport {
    fn new(name: impl Into<String>) -> Self {
        CheckReport {
            check_name: name.into(),
            instances_tested: 0,
            failure_count: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn tested(&mut self, n: u64) {
        self.instances_tested += n;
    }

    fn fail(&mut self, input: impl Into<String>, observed: impl Into<String>, expected: impl Into<String>) {
        self.failure_count += 1;
        if self.failures.len() < MAX_RECORDED {
            self.failures.push(Counterexample {
                input: input.into(),
                observed: observed.into(),
                expected: expected.into(),
            });
        }
    }

    /// Records a failure unless `ok`.
    fn expect(&mut self, ok: bool, input: impl FnOnce() -> String, observed: impl FnOnce() -> String, expected: &str) {
        self.tested(1);
        if !ok {
            self.fail(input(), observed(), expected);
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}] {}: {} instances, {} failures",
            if self.passed() { "PASS" } else { "FAIL" },
            self.check_name,
            self.instances_tested,
            self.failure_count
        )?;
        for c in &self.failures {
            writeln!(f, "  input:    {}", c.input)?;
            writeln!(f, "  observed: {}", c.observed)?;
            writeln!(f, "  expected: {}", c.expected)?;
        }
        if self.failure_count as usize > self.failures.len() {
            writeln!(f, "  ... {} more", self.failure_count as usize - self.failures.len())?;
        }
        Ok(())
    }
}

fn letters_to_string(letters: &[u8]) -> String {
    letters.iter().map(|&b| char::from(b'0' + b)).collect()
}

fn abbreviate(w: &Word) -> String {
    if w.len() <= 80 {
        w.to_string()
    } else {
        format!("{}... ({} letters)", w.subword(0..80), w.len())
    }
}

fn require_alpha(alpha: Rational) -> Result<()> {
    if alpha <= Rational::from_integer(2) {
        return Err(Error::precondition(format!("alpha must exceed 2, got {alpha}")));
    }
    Ok(())
}

fn is_free_letters(letters: &[u8], alpha: Rational) -> bool {
    !runs_of_letters(letters).iter().any(|r| alpha.reached_by(r.length, r.period))
}

fn mu_letters(letters: &[u8]) -> Vec<u8> {
    letters.iter().flat_map(|&b| [b, 1 - b]).collect()
}

/// Whether some suffix of `w` is a power of exponent at least `alpha`.
fn has_power_suffix(w: &[u8], alpha: Rational) -> bool {
    let n = w.len();
    (1..=n / 2).any(|p| {
        let need = alpha.min_length_for_period(p as u64) as usize;
        need <= n && (n - need..n - p).all(|j| w[j] == w[j + p])
    })
}

/// A uniformly seeded random `alpha`-power-free word of length `len`, found
/// by depth-first search with random letter order.
pub fn random_free_word(alpha: Rational, len: usize, rng: &mut impl Rng) -> Option<Vec<u8>> {
    let mut w: Vec<u8> = Vec::with_capacity(len);
    // (first letter tried, letters tried so far) per position
    let mut choices: Vec<(u8, u8)> = Vec::with_capacity(len);
    while w.len() < len {
        choices.push((rng.gen_range(0..2), 0));
        loop {
            let top = choices.last_mut()?;
            if top.1 == 2 {
                choices.pop();
                w.pop()?;
                continue;
            }
            let letter = top.0 ^ top.1;
            top.1 += 1;
            w.push(letter);
            if !has_power_suffix(&w, alpha) {
                break;
            }
            w.pop();
        }
    }
    Some(w)
}

/// A random `alpha`-power-free factor `00v` of a Thue-Morse image, with
/// `|v| <= max_len`: take a random `alpha`-free `u`, then a factor of
/// `mu(u)` starting at a random occurrence of `00`.
pub fn sample_00v(alpha: Rational, max_len: usize, rng: &mut impl Rng) -> Option<Vec<u8>> {
    let u = random_free_word(alpha, max_len / 2 + 3, rng)?;
    let image = mu_letters(&u);
    let starts: Vec<usize> = (0..image.len() - 1)
        .filter(|&i| image[i] == 0 && image[i + 1] == 0)
        .collect();
    if starts.is_empty() {
        return None;
    }
    let q = starts[rng.gen_range(0..starts.len())];
    let longest = (image.len() - q - 2).min(max_len);
    let v_len = rng.gen_range(0..=longest);
    Some(image[q..q + 2 + v_len].to_vec())
}

/// No factor of `mu^s(01)` longer than `2^s` has period `2^s`, for every
/// `1 <= s <= s_max`.
pub fn check_lemma1(s_max: u32) -> Result<CheckReport> {
    if s_max == 0 {
        return Err(Error::precondition("s_max must be at least 1"));
    }
    let base: Word = "01".parse()?;
    let mut report = CheckReport::new(format!("lemma1 (s <= {s_max})"));
    for s in 1..=s_max {
        let image = base.mu_pow(s)?;
        check_no_long_factor_with_period(&image, s, &mut report);
    }
    Ok(report)
}

/// The per-word part of [`check_lemma1`], exposed so it can be run on words
/// that are not Thue-Morse images.
pub fn check_lemma1_on(word: &Word, s: u32) -> CheckReport {
    let mut report = CheckReport::new(format!("lemma1 on a given word (s = {s})"));
    check_no_long_factor_with_period(word, s, &mut report);
    report
}

fn check_no_long_factor_with_period(word: &Word, s: u32, report: &mut CheckReport) {
    let period = 1u64 << s;
    let n = word.len();
    if n <= period {
        return;
    }
    let letters = word.to_letters();
    for start in 0..(n - period) as usize {
        let p = period as usize;
        // Factors of length > p starting here; all of them contain the
        // first comparison, so one matching pair is the shortest offender.
        report.tested(n - period - start as u64);
        let mut matched = 0;
        while start + matched + p < letters.len() && letters[start + matched] == letters[start + matched + p] {
            matched += 1;
        }
        if matched > 0 {
            report.fail(
                format!("s = {s}, factor at {start} of length {}", p + matched),
                format!("has period {period}"),
                format!("no factor longer than {period} with period {period}"),
            );
        }
    }
}

/// `w` is `alpha`-free exactly when `mu(w)` is: all words of length at most
/// `max_len`, then `sample_count` random longer words.
pub fn check_theorem2(sample_count: usize, max_len: usize, alpha: Rational, seed: u64) -> Result<CheckReport> {
    require_alpha(alpha)?;
    let mut report = CheckReport::new(format!("theorem2 (alpha = {alpha}, exhaustive |w| <= {max_len})"));
    let check = |w: &[u8], report: &mut CheckReport| {
        let lhs = is_free_letters(w, alpha);
        let rhs = is_free_letters(&mu_letters(w), alpha);
        report.expect(
            lhs == rhs,
            || letters_to_string(w),
            || format!("w free: {lhs}, mu(w) free: {rhs}"),
            "equal verdicts",
        );
    };
    let mut w = Vec::with_capacity(max_len);
    for len in 0..=max_len {
        if len >= 64 {
            return Err(Error::size("exhaustive enumeration limited to lengths below 64"));
        }
        for bits in 0..(1u64 << len) {
            w.clear();
            w.extend((0..len).map(|i| ((bits >> i) & 1) as u8));
            check(&w, &mut report);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..sample_count {
        let len = rng.gen_range(max_len + 1..=4 * max_len + 4);
        // Alternate plain random words with free words carrying one flipped
        // letter, so both verdicts show up.
        let sample = if k % 2 == 0 {
            (0..len).map(|_| rng.gen_range(0..2)).collect()
        } else {
            let mut v = random_free_word(alpha, len, &mut rng).unwrap_or_default();
            if !v.is_empty() && rng.gen_bool(0.5) {
                let i = rng.gen_range(0..v.len());
                v[i] ^= 1;
            }
            v
        };
        check(&sample, &mut report);
    }
    Ok(report)
}

/// If `mu(w)` has a factor `u` with period `p` and `|u|/p > 2` then `w` has
/// a factor of length `ceil(|u|/2)` with period `p/2`.
pub fn check_theorem3(sample_count: usize, max_len: usize, seed: u64) -> Result<CheckReport> {
    check_theorem3_with_slack(sample_count, max_len, seed, 0)
}

/// [`check_theorem3`] demanding `ceil(|u|/2) + slack` letters; a positive
/// slack asks for more than the theorem gives and must produce failures.
pub fn check_theorem3_with_slack(sample_count: usize, max_len: usize, seed: u64, slack: u64) -> Result<CheckReport> {
    if max_len == 0 {
        return Err(Error::precondition("max_len must be positive"));
    }
    let mut report = CheckReport::new(format!("theorem3 ({sample_count} samples, |w| <= {max_len})"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..sample_count {
        let len = rng.gen_range(1..=max_len);
        let w: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2)).collect();
        theorem3_instance(&w, slack, &mut report)?;
    }
    Ok(report)
}

fn theorem3_instance(w: &[u8], slack: u64, report: &mut CheckReport) -> Result<()> {
    let image = mu_letters(w);
    let word = Word::from_letters(w)?;
    // Every maximal periodic factor, for every period, not just minimal ones.
    for seg in naive_power_segments(&image, Rational::from_integer(2), NAIVE_LIMIT)? {
        if seg.length <= 2 * seg.period {
            continue;
        }
        if seg.period % 2 == 1 {
            report.expect(
                false,
                || letters_to_string(w),
                || format!("mu(w) has {seg:?} with odd period"),
                "only even periods above exponent 2",
            );
            continue;
        }
        let half = seg.period / 2;
        let need = seg.length.div_ceil(2) + slack;
        let beta = Rational::ratio(need, half)?;
        let found = repetition::find_power_with_period(&word, beta, half)?;
        report.expect(
            found.is_some(),
            || letters_to_string(w),
            || format!("no factor of length {need} with period {half} (from {seg:?} in mu(w))"),
            "a factor of length ceil(|u|/2) with period p/2",
        );
    }
    Ok(())
}

/// For `alpha`-free `00v` in the Thue-Morse factor language, the only
/// `alpha`-power in `0^r v` (`r = ceil(alpha)`) is its prefix `0^r`.
pub fn check_lemma4(alpha: Rational, sample_count: usize, max_len: usize, seed: u64) -> Result<CheckReport> {
    require_alpha(alpha)?;
    let r = alpha.ceil() as usize;
    let mut report = CheckReport::new(format!("lemma4 (alpha = {alpha}, {sample_count} samples)"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = vec![vec![0, 0]];
    for _ in 0..sample_count {
        if let Some(s) = sample_00v(alpha, max_len, &mut rng) {
            samples.push(s);
        }
    }
    for zz_v in samples {
        if !sample_is_valid(&zz_v, alpha, &mut report)? {
            continue;
        }
        let mut padded = vec![0u8; r];
        padded.extend_from_slice(&zz_v[2..]);
        let powers = naive_power_segments(&padded, alpha, NAIVE_LIMIT)?;
        let expected = [Run::new(0, 1, r as u64)];
        report.expect(
            powers == expected,
            || format!("0^{r} v with 00v = {}", letters_to_string(&zz_v)),
            || format!("{powers:?}"),
            "only the prefix 0^r",
        );
    }
    Ok(report)
}

fn sample_is_valid(zz_v: &[u8], alpha: Rational, report: &mut CheckReport) -> Result<bool> {
    let w = Word::from_letters(zz_v)?;
    let ok = zz_v.starts_with(&[0, 0]) && w.in_language_l() && is_free_letters(zz_v, alpha);
    if !ok {
        report.expect(false, || letters_to_string(zz_v), || "invalid sample".into(), "00v in L and alpha-free");
    }
    Ok(ok)
}

/// The three parts of the image lemma for one obtainable parameter set,
/// over random `00v`: the image has a prefix `beta`-power of period `2^s`;
/// every power of period `p` in `00v` reappears with period `2^s p`; the
/// image is `alpha`-free. Also checks the image starts with `00` and lies in
/// the factor language.
pub fn check_lemma5(params: &ObtainableParams, alpha: Rational, sample_count: usize, seed: u64) -> Result<CheckReport> {
    check_lemma5_claiming(params, params.beta(), alpha, sample_count, seed)
}

/// [`check_lemma5`] with the prefix-power exponent replaced by
/// `claimed_beta`; anything above the true `beta` must fail.
pub fn check_lemma5_claiming(
    params: &ObtainableParams,
    claimed_beta: Rational,
    alpha: Rational,
    sample_count: usize,
    seed: u64,
) -> Result<CheckReport> {
    require_alpha(alpha)?;
    if ObtainableParams::new(alpha, params.s(), params.t())? != *params {
        return Err(Error::precondition(format!("{params:?} is not valid for alpha = {alpha}")));
    }
    let mut report = CheckReport::new(format!(
        "lemma5 (alpha = {alpha}, s = {}, t = {}, beta = {})",
        params.s(),
        params.t(),
        params.beta()
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = vec![vec![0, 0]];
    for _ in 0..sample_count {
        if let Some(s) = sample_00v(alpha, 64, &mut rng) {
            samples.push(s);
        }
    }
    let scale = params.scale();
    for zz_v in samples {
        if !sample_is_valid(&zz_v, alpha, &mut report)? {
            continue;
        }
        let v = Word::from_letters(&zz_v[2..])?;
        let image = construction::phi(params, &v)?;
        let label = || format!("v = {}", letters_to_string(&zz_v[2..]));

        report.expect(
            image.len() >= 2 && image.get(0) == 0 && image.get(1) == 0 && image.in_language_l(),
            label,
            || abbreviate(&image),
            "image of the form 00v' in the factor language",
        );

        let prefix = periodic_prefix_length(&image, scale);
        report.expect(
            claimed_beta.reached_by(prefix, scale),
            label,
            || format!("prefix with period {scale} has length {prefix}"),
            &format!("prefix power of exponent >= {claimed_beta}"),
        );

        for seg in naive_power_segments(&zz_v, Rational::from_integer(2), NAIVE_LIMIT)? {
            let beta = seg.exponent();
            let found = repetition::find_power_with_period(&image, beta, scale * seg.period)?;
            report.expect(
                found.is_some(),
                label,
                || format!("no {beta}-power of period {} for {seg:?}", scale * seg.period),
                "scaled power present",
            );
        }

        let verdict = repetition::is_power_free(&image, alpha)?;
        report.expect(verdict.is_free(), label, || format!("{verdict:?}"), "alpha-power-free image");
    }
    Ok(report)
}

/// Length of the longest prefix of `w` with the given period.
fn periodic_prefix_length(w: &Word, period: u64) -> u64 {
    let mut j = 0;
    while j + period < w.len() && w.get(j) == w.get(j + period) {
        j += 1;
    }
    (j + period).min(w.len())
}

/// Builds the greedy schedule and every word up to `levels`, then checks
/// the prefix chain, the intermediate images, freeness of the final word,
/// its predicted witnesses, and `beta_n <= max exponent < alpha`.
pub fn verify_construction(alpha: Rational, levels: usize) -> Result<CheckReport> {
    verify_construction_within(alpha, levels, construction::DEFAULT_BUDGET)
}

pub fn verify_construction_within(alpha: Rational, levels: usize, budget: u64) -> Result<CheckReport> {
    require_alpha(alpha)?;
    if levels == 0 {
        return Err(Error::precondition("levels must be at least 1"));
    }
    let schedule = construction::build_schedule(alpha, levels, None)?;
    let mut report = CheckReport::new(format!("construction (alpha = {alpha}, {levels} levels)"));

    let mut previous: Option<Word> = None;
    for k in 1..=levels {
        let (w, _) = construction::build_word_within(&schedule.truncated(k), budget)?;
        if let Some(prev) = &previous {
            report.expect(
                prev.is_prefix_of(&w),
                || format!("w_{} and w_{k}", k - 1),
                || "not a prefix".into(),
                "w_(k-1) is a prefix of w_k",
            );
        }
        previous = Some(w);
    }

    // Intermediate images, innermost first.
    let mut image = Word::new();
    for (idx, p) in schedule.params().iter().enumerate().rev() {
        let arg = if image.is_empty() { Word::new() } else { image.delete_prefix(2)? };
        image = construction::phi(p, &arg)?;
        let level = idx + 1;
        report.expect(
            image.len() >= 2 && image.get(0) == 0 && image.get(1) == 0 && image.in_language_l(),
            || format!("image at level {level}"),
            || abbreviate(&image),
            "begins with 00 and lies in the factor language",
        );
    }

    let word = previous.expect("levels >= 1");
    let witnesses = construction::predicted_witnesses(&schedule)?;
    let final_report = check_constructed_word(&schedule, &word, &witnesses)?;
    report.instances_tested += final_report.instances_tested;
    for c in final_report.failures {
        report.fail(c.input, c.observed, c.expected);
    }
    Ok(report)
}

/// Freeness, witnesses and the exponent squeeze for a word claimed to be
/// `w_n` for `schedule`.
pub fn check_constructed_word(
    schedule: &Schedule,
    word: &Word,
    witnesses: &[PredictedWitness],
) -> Result<CheckReport> {
    let alpha = schedule.target_alpha();
    let n = schedule.len();
    let mut report = CheckReport::new(format!("constructed word (alpha = {alpha}, {n} levels)"));
    let label = || format!("w_{n} ({} letters)", word.len());

    let runs = repetition::maximal_repetitions(word);
    let verdict = repetition::verdict_from_runs(&runs, alpha)?;
    report.expect(verdict.is_free(), label, || format!("{verdict:?}"), "alpha-power-free");

    for wit in witnesses {
        let found = repetition::find_power_with_period(word, wit.beta, wit.period)?;
        report.expect(
            found.is_some_and(|r| r.length >= wit.min_length),
            label,
            || format!("level {} witness missing: {found:?}", wit.level),
            &format!("{}-power with period {} and length >= {}", wit.beta, wit.period, wit.min_length),
        );
    }

    if let Some(last) = schedule.params().last() {
        let max = repetition::max_exponent_run(&runs).map(|r| r.exponent());
        let ok = max.is_some_and(|m| m >= last.beta() && m < alpha);
        report.expect(
            ok,
            label,
            || format!("max exponent {max:?}"),
            &format!("max exponent in [{}, {alpha})", last.beta()),
        );
    }
    Ok(report)
}

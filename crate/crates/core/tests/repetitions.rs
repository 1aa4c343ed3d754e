use critexp::repetition::{self, naive_power_segments, Run, Verdict};
use critexp::{Rational, Word};
use proptest::prelude::*;

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn letters(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..2, 0..max)
}

fn smallest_period(w: &[u8]) -> usize {
    (1..=w.len()).find(|&p| (p..w.len()).all(|i| w[i] == w[i - p])).unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn runs_are_maximal_with_minimal_period(v in letters(120)) {
        let runs = repetition::runs_of_letters(&v);
        for r in &runs {
            let (s, e, p) = (r.start as usize, r.end() as usize, r.period as usize);
            prop_assert!(r.length >= 2 * r.period);
            prop_assert_eq!(smallest_period(&v[s..e]), p);
            prop_assert!(s == 0 || v[s - 1] != v[s - 1 + p]);
            prop_assert!(e == v.len() || v[e] != v[e - p]);
        }
        let mut sorted = runs.clone();
        sorted.sort_by_key(|r| (r.start, r.period));
        prop_assert_eq!(&sorted, &runs);
    }

    #[test]
    fn runs_match_naive_segments(v in letters(120)) {
        // Every maximal square-or-more with minimal period is a run.
        let naive: Vec<Run> = naive_power_segments(&v, q(2, 1), 4096)
            .unwrap()
            .into_iter()
            .filter(|r| smallest_period(&v[r.start as usize..r.end() as usize]) == r.period as usize)
            .collect();
        let mut fast = repetition::runs_of_letters(&v);
        let mut naive = naive;
        fast.sort();
        naive.sort();
        naive.dedup();
        prop_assert_eq!(fast, naive);
    }

    #[test]
    fn max_exponent_matches_oracle(v in letters(200)) {
        let w = Word::from_letters(&v).unwrap();
        prop_assert_eq!(repetition::max_exponent(&w), repetition::naive_max_exponent(&w).unwrap());
    }

    #[test]
    fn freeness_is_monotone_in_alpha(v in letters(80), k in 0i64..40) {
        let w = Word::from_letters(&v).unwrap();
        let a = q(41 + k, 20);
        let b = q(42 + k, 20);
        if repetition::is_power_free(&w, a).unwrap().is_free() {
            prop_assert!(repetition::is_power_free(&w, b).unwrap().is_free());
        }
    }

    #[test]
    fn freeness_is_factor_closed(v in letters(80), a in 0usize..80, b in 0usize..80) {
        let alpha = q(5, 2);
        let w = Word::from_letters(&v).unwrap();
        if repetition::is_power_free(&w, alpha).unwrap().is_free() {
            let (a, b) = (a.min(v.len()), b.min(v.len()));
            let f = Word::from_letters(&v[a.min(b)..a.max(b)]).unwrap();
            prop_assert!(repetition::is_power_free(&f, alpha).unwrap().is_free());
        }
    }

    #[test]
    fn verdict_agrees_with_max_exponent(v in letters(100), k in 1i64..30) {
        let alpha = q(40 + k, 20);
        let w = Word::from_letters(&v).unwrap();
        let max = repetition::max_exponent(&w);
        match repetition::is_power_free(&w, alpha).unwrap() {
            Verdict::Free => prop_assert!(max.is_none_or(|m| m < alpha)),
            Verdict::Violation(run) => {
                prop_assert!(run.exponent() >= alpha);
                let (s, e) = (run.start as usize, run.end() as usize);
                prop_assert!((s + run.period as usize..e).all(|i| v[i] == v[i - run.period as usize]));
            }
        }
    }

    #[test]
    fn find_power_with_period_is_exact(v in letters(100), p in 1u64..12) {
        let w = Word::from_letters(&v).unwrap();
        let beta = q(5, 2);
        let found = repetition::find_power_with_period(&w, beta, p).unwrap();
        let naive_hit = (0..v.len()).any(|s| {
            let mut e = s + p as usize;
            while e < v.len() && v[e] == v[e - p as usize] {
                e += 1;
            }
            e.min(v.len()) as i64 * 2 - s as i64 * 2 >= 5 * p as i64
        });
        prop_assert_eq!(found.is_some(), naive_hit);
        if let Some(r) = found {
            prop_assert_eq!(r.period, p);
            prop_assert!(r.length * 2 >= 5 * p);
        }
    }
}

#[test]
fn exhaustive_agreement_up_to_length_14() {
    for n in 0..=14u32 {
        for bits in 0..(1u64 << n) {
            let v: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
            let w = Word::from_letters(&v).unwrap();
            assert_eq!(repetition::max_exponent(&w), repetition::naive_max_exponent(&w).unwrap(), "{w}");
        }
    }
}

#[test]
fn small_examples() {
    let w: Word = "0010010".parse().unwrap();
    assert_eq!(repetition::max_exponent(&w), Some(q(7, 3)));
    assert!(repetition::is_power_free(&w, q(5, 2)).unwrap().is_free());
    let v = repetition::is_power_free(&w, q(7, 3)).unwrap();
    assert_eq!(v.witness(), Some(&Run::new(0, 3, 7)));

    let tm = Word::mu_pow_letter(0, 12).unwrap();
    assert_eq!(repetition::max_exponent(&tm), Some(q(2, 1)));
    assert!(repetition::is_power_free(&tm, q(201, 100)).unwrap().is_free());

    assert!(repetition::is_power_free(&w, q(2, 1)).is_err());
    assert_eq!(repetition::max_exponent(&"01".parse().unwrap()), None);
}

#[test]
fn naive_oracle_refuses_long_input() {
    let w = Word::zeros(5000);
    assert!(repetition::naive_max_exponent(&w).is_err());
}

//! Exact fractions for exponents.
//!
//! A [`Rational`] is always kept in lowest terms with a positive
//! denominator. Comparisons cross-multiply in `i128`, so any two values with
//! `i64` components compare exactly.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

impl Rational {
    /// Builds `num/den` in lowest terms.
    ///
    /// Panics if `den == 0`; use [`Rational::try_new`] for untrusted input.
    pub fn new(num: i64, den: i64) -> Self {
        Self::try_new(num, den).expect("invalid rational")
    }

    pub fn try_new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::format("zero denominator"));
        }
        Self::reduce_wide(num as i128, den as i128)
    }

    pub fn from_integer(n: i64) -> Self {
        Rational { num: n, den: 1 }
    }

    /// The exponent `length / period` of a repetition.
    pub fn ratio(length: u64, period: u64) -> Result<Self> {
        if period == 0 {
            return Err(Error::precondition("period must be positive"));
        }
        Self::reduce_wide(length as i128, period as i128)
    }

    fn reduce_wide(num: i128, den: i128) -> Result<Self> {
        let g = num.gcd(&den);
        let (mut n, mut d) = if g == 0 { (0, 1) } else { (num / g, den / g) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(num), Ok(den)) => Ok(Rational { num, den }),
            _ => Err(Error::size(format!("rational {num}/{den} exceeds 64-bit components"))),
        }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn floor(&self) -> i64 {
        self.num.div_euclid(self.den)
    }

    pub fn ceil(&self) -> i64 {
        let q = self.num.div_euclid(self.den);
        if self.num.rem_euclid(self.den) == 0 {
            q
        } else {
            q + 1
        }
    }

    pub fn checked_sub(&self, other: &Rational) -> Option<Rational> {
        let num = self.num as i128 * other.den as i128 - other.num as i128 * self.den as i128;
        let den = self.den as i128 * other.den as i128;
        Self::reduce_wide(num, den).ok()
    }

    pub fn checked_add(&self, other: &Rational) -> Option<Rational> {
        let num = self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128;
        let den = self.den as i128 * other.den as i128;
        Self::reduce_wide(num, den).ok()
    }

    /// Compares `self` against `numer / denom` without building a fraction.
    pub fn cmp_ratio(&self, numer: u64, denom: u64) -> Ordering {
        debug_assert!(denom > 0);
        let lhs = self.num as i128 * denom as i128;
        let rhs = numer as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }

    /// True when a repetition of this length and period reaches this exponent.
    pub fn reached_by(&self, length: u64, period: u64) -> bool {
        self.cmp_ratio(length, period) != Ordering::Greater
    }

    /// Smallest `m` with `m / period >= self`, i.e. `ceil(self * period)`.
    pub fn min_length_for_period(&self, period: u64) -> i128 {
        let prod = self.num as i128 * period as i128;
        let den = self.den as i128;
        let q = prod.div_euclid(den);
        if prod.rem_euclid(den) == 0 {
            q
        } else {
            q + 1
        }
    }

    /// Decimal expansion truncated (not rounded) to `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let mut out = String::new();
        let mut num = self.num as i128;
        let den = self.den as i128;
        if num < 0 {
            out.push('-');
            num = -num;
        }
        out.push_str(&(num / den).to_string());
        let mut rem = num % den;
        if digits > 0 {
            out.push('.');
            for _ in 0..digits {
                rem *= 10;
                out.push(char::from(b'0' + (rem / den) as u8));
                rem %= den;
            }
        }
        out
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_digits(s: &str, what: &str) -> Result<i64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::format(format!("invalid {what} `{s}`")));
    }
    s.parse::<i64>()
        .map_err(|_| Error::size(format!("{what} `{s}` does not fit in 64 bits")))
}

/// Accepts `p/q`, an integer, or a finite decimal such as `2.1`.
///
/// Decimals are converted digit by digit, so `"2.1"` is exactly `21/10`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let value = if let Some((p, q)) = body.split_once('/') {
            let num = parse_digits(p, "numerator")?;
            let den = parse_digits(q, "denominator")?;
            Rational::try_new(num, den)?
        } else if let Some((int, frac)) = body.split_once('.') {
            let whole = parse_digits(int, "integer part")?;
            parse_digits(frac, "fraction part")?;
            let scale = u32::try_from(frac.len())
                .ok()
                .and_then(|e| 10i64.checked_pow(e))
                .ok_or_else(|| Error::size(format!("too many decimal digits in `{s}`")))?;
            let frac_val: i64 = frac.parse().expect("digits checked");
            let num = whole
                .checked_mul(scale)
                .and_then(|w| w.checked_add(frac_val))
                .ok_or_else(|| Error::size(format!("decimal `{s}` does not fit in 64 bits")))?;
            Rational::try_new(num, scale)?
        } else {
            Rational::from_integer(parse_digits(body, "integer")?)
        };
        Ok(if negative {
            Rational { num: -value.num, den: value.den }
        } else {
            value
        })
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

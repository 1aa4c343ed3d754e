//! Binary words with a prescribed critical exponent.
//!
//! For a rational `alpha > 2` the [`construction`] module builds prefixes of
//! an infinite binary word that avoids every power of exponent `alpha` or
//! more, yet contains powers with exponents arbitrarily close to `alpha`.
//! The [`repetition`] module decides such claims exactly, and
//! [`verification`] turns the supporting facts about the Thue-Morse
//! morphism into executable checks.
//!
//! ```
//! use critexp::{construction, repetition, Rational};
//!
//! let alpha: Rational = "7/3".parse().unwrap();
//! let schedule = construction::build_schedule(alpha, 2, None).unwrap();
//! let (word, _witnesses) = construction::build_word(&schedule).unwrap();
//! assert_eq!(word.len(), 4713);
//! assert!(repetition::is_power_free(&word, alpha).unwrap().is_free());
//! assert_eq!(repetition::max_exponent(&word), Some(Rational::new(147, 64)));
//! ```

pub mod construction;
pub mod error;
pub mod rational;
pub mod repetition;
pub mod verification;
pub mod word;

pub use error::{Error, Result};
pub use rational::Rational;
pub use repetition::{Run, Verdict};
pub use word::{MorphismTable, Word};

// The guide's snippets run as doctests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/exponents.md")]
    mod exponents {}
    #[doc = include_str!("../../../book/src/runs.md")]
    mod runs {}
    #[doc = include_str!("../../../book/src/construction.md")]
    mod construction {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

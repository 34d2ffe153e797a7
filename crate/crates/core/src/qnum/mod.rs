//! Exact scalars: rationals, q-brackets and sums of square roots.
//!
//! Everything downstream bottoms out in these types. Nothing here holds
//! shared state; callers that want memoization (the action engine does) keep
//! their own caches.

mod factor;
mod qvalue;
mod radical;
mod rational;

pub use factor::{factor_bracket, factor_integer, Factored};
pub use qvalue::{qbracket, QValue};
pub use radical::{radical_of, radsum_add, radsum_is_zero, radsum_mul, RadicalSum, DEFAULT_DECIMAL_PLACES};
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QnumError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
    #[error("exponent {0} out of range")]
    ExponentOverflow(i64),
    #[error("q = {0} is not allowed (q must avoid 0, 1 and -1)")]
    InvalidQ(String),
    #[error("negative radicand {0}")]
    NegativeRadicand(String),
}

//! Exact and enclosure arithmetic: rationals, dyadics and balls.

pub mod ball;
pub mod dyadic;
mod kernels;
pub mod rational;

pub use ball::Ball;
pub use dyadic::{parse_decimal, Dyadic};
pub use rational::Rational;

/// Working precision in bits that resolves `digits` decimal digits, with
/// guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
}

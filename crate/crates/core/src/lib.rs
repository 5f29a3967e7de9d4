//! Greedy and optimal Egyptian-fraction underapproximations, Sylvester-like
//! sequences and rigorous evaluation of their doubly exponential limits.

pub mod best_under;
pub mod construct;
pub mod egyptian;
pub mod error;
pub mod exec;
pub mod limits;
pub mod numeric;
pub mod sylvester;

pub use error::{Error, Result};
pub use numeric::{Ball, Dyadic, Rational};

/// Decimal digits used when none are requested.
pub const DEFAULT_DIGITS: u32 = 30;
/// Largest accepted digit request.
pub const MAX_DIGITS: u32 = 1000;
/// Default bound on materialized greedy and Sylvester terms.
pub const DEFAULT_TERM_CAP: usize = 20;
/// Default bound on the divergence index checked by the claims.
pub const DEFAULT_CLAIM_CAP: usize = 10;
/// Default branch-and-bound node budget.
pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

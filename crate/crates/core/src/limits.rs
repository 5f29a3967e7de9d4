//! Rigorous limits `lim c_n^(1/2^n)` of eventually Sylvester sequences, the
//! auxiliary function `f`, and exact sign certificates for the `h_j` terms
//! of its derivative.
//!
//! With `w_n = c_n - 1/2` the recurrence becomes `w_{n+1} = w_n^2 + 1/4`, so
//!
//! ```text
//! J = 2^-N log w_N + sum_{n >= N} 2^-(n+1) log(1 + 1/(4 w_n^2)),   lim = e^J.
//! ```
//!
//! The summands decrease, and `log(1 + y) <= y`, so the part of the series
//! from index `N + M` on is at most `2^-(N+M) / (4 w_{N+M}^2)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::Serialize;

use crate::egyptian::{is_eventually_sylvester, SeqSpec, Tail};
use crate::error::{Error, Result};
use crate::numeric::{bits_for_digits, Ball, Dyadic, Rational};
use crate::{DEFAULT_TERM_CAP, MAX_DIGITS};

/// Largest `j` accepted by [`h_j_eval`].
pub const H_J_MAX: usize = 30;

/// Extra precision rounds tried before giving up on a radius target.
const RETRIES: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitResult {
    pub value: Ball,
    #[serde(rename = "start_index_N")]
    pub start_index_n: usize,
    pub series_terms_used: usize,
    pub tail_bound: Ball,
}

fn check_digits(digits: u32) -> Result<()> {
    if digits == 0 {
        return Err(Error::invalid("digits must be positive"));
    }
    if digits > MAX_DIGITS {
        return Err(Error::cap("digits", digits, MAX_DIGITS));
    }
    Ok(())
}

fn ten_pow_neg(digits: u32) -> Rational {
    Rational::new(1, num_traits::pow(BigInt::from(10), digits as usize)).expect("nonzero")
}

/// Start index and the exact term there for a spec that follows the
/// recurrence from that index on.
fn sylvester_start(spec: &SeqSpec) -> Result<(usize, Rational)> {
    let n = match spec.tail() {
        Tail::Sylvester { from } => *from,
        _ => is_eventually_sylvester(spec)?
            .ok_or_else(|| Error::invalid("sequence is not eventually Sylvester"))?,
    };
    if matches!(spec.tail(), Tail::None) {
        return Err(Error::invalid("a finite sequence has no limit"));
    }
    let c_n = spec
        .terms_exact(n, n.max(DEFAULT_TERM_CAP))?
        .pop()
        .expect("n >= 1");
    if c_n < 2 {
        return Err(Error::domain(format!(
            "recurrence must start at a term of at least 2, got {c_n}"
        )));
    }
    Ok((n, c_n))
}

/// `J` as a ball at `bits`, with the number of series terms used and the
/// truncation bound.
fn j_series(n: usize, c_n: &Rational, bits: u32) -> Result<(Ball, usize, Rational)> {
    let quarter = Rational::new(1, 4)?;
    let mut w = c_n - Rational::new(1, 2)?;
    let mut acc = Ball::from_rational(&w, bits)?.log()?.mul_2exp(-(n as i64));
    let target = Dyadic::pow2(-(bits as i64)).to_rational();
    let mut used = 0usize;
    loop {
        let index = n + used;
        let y = (&w * &w * Rational::from(4)).recip()?;
        let tail = &y * Dyadic::pow2(-(index as i64)).to_rational();
        if tail < target {
            return Ok((acc, used, tail));
        }
        let term = Ball::from_rational(&y, bits)?
            .log1p()?
            .mul_2exp(-(index as i64 + 1));
        acc = acc.add(&term);
        w = &w * &w + &quarter;
        used += 1;
    }
}

fn limit_bits(digits: u32, c_n: &Rational, n: usize) -> u32 {
    // e^J is about c_N^(2^-N); leave room for its integer part
    let magnitude = (c_n.numer().bits() as i64 - c_n.denom().bits() as i64).max(0) as u64;
    let int_bits = (magnitude >> n.min(63)) as u32 + 1;
    bits_for_digits(digits) + int_bits
}

/// `lim c_n^(1/2^n)` with radius at most `10^-digits`.
pub fn seq_limit(spec: &SeqSpec, digits: u32) -> Result<LimitResult> {
    check_digits(digits)?;
    let (n, c_n) = sylvester_start(spec)?;
    let goal = ten_pow_neg(digits);
    let mut bits = limit_bits(digits, &c_n, n);
    for _ in 0..RETRIES {
        let (j, used, tail) = j_series(n, &c_n, bits)?;
        let tail_up = Dyadic::from_rational_up(&tail, 32);
        let value = j.inflate(&tail_up).exp()?;
        if value.radius().to_rational() <= goal {
            return Ok(LimitResult {
                value,
                start_index_n: n,
                series_terms_used: used,
                tail_bound: Ball::exact(tail_up, bits),
            });
        }
        bits += 32;
    }
    Err(Error::verification(format!(
        "could not reach {digits} digits for the limit"
    )))
}

/// Sylvester's growth constant `lim u_n^(1/2^n)`.
pub fn vardi(digits: u32) -> Result<Ball> {
    Ok(seq_limit(&SeqSpec::sylvester(), digits)?.value)
}

/// `c_n^(1/2^n)` from the exact term.
pub fn direct_estimate(spec: &SeqSpec, n: usize, digits: u32, term_cap: usize) -> Result<Ball> {
    check_digits(digits)?;
    if n == 0 {
        return Err(Error::invalid("index must be positive"));
    }
    let c = spec.terms_exact(n, term_cap)?.pop().expect("n >= 1");
    if !c.is_positive() {
        return Err(Error::domain("term must be positive"));
    }
    let bits = bits_for_digits(digits) + 8;
    Ball::from_rational(&c, bits)?.root_pow2(n as u32)
}

/// `f(x) = log x + sum_{j >= 1} 2^-j log(1 + 1/a_j^2)` with `a_1 = x`,
/// `2 a_{j+1} = a_j^2 + 1`, to radius `10^-digits`.
///
/// After `M` terms the rest is at most `2^-M / a_{M+1}^2`.
pub fn f_eval(x: &Rational, digits: u32) -> Result<Ball> {
    check_digits(digits)?;
    if *x < 3 {
        return Err(Error::domain(format!("f is evaluated on x >= 3, got {x}")));
    }
    let goal = ten_pow_neg(digits);
    let magnitude = (x.numer().bits() as i64 - x.denom().bits() as i64).max(0) as u32;
    let mut bits = bits_for_digits(digits) + 32 - magnitude.leading_zeros();
    for _ in 0..RETRIES {
        let target = Dyadic::pow2(-(bits as i64)).to_rational();
        let mut acc = Ball::from_rational(x, bits)?.log()?;
        let mut a = x.clone();
        let mut j: i64 = 1;
        let tail = loop {
            let y = (&a * &a).recip()?;
            // remaining terms j.. are at most 2^-(j-1) / a_j^2
            let rest = &y * Dyadic::pow2(-(j - 1)).to_rational();
            if rest < target {
                break rest;
            }
            acc = acc.add(&Ball::from_rational(&y, bits)?.log1p()?.mul_2exp(-j));
            a = (&a * &a + Rational::one()) * Rational::new(1, 2)?;
            j += 1;
        };
        let value = acc.inflate(&Dyadic::from_rational_up(&tail, 32));
        if value.radius().to_rational() <= goal {
            return Ok(value);
        }
        bits += 32;
    }
    Err(Error::verification(format!(
        "could not reach {digits} digits for f"
    )))
}

/// `exp((f(2 c_N - 1) - log 2) / 2^N)`, the same limit as [`seq_limit`]
/// through the function `f`.
pub fn seq_limit_via_f(spec: &SeqSpec, digits: u32) -> Result<Ball> {
    check_digits(digits)?;
    let (n, c_n) = sylvester_start(spec)?;
    let z1 = &c_n * Rational::from(2) - Rational::one();
    let bits = limit_bits(digits, &c_n, n) + 8;
    let f = f_eval(&z1, (digits + 8).min(MAX_DIGITS))?;
    let log2 = Ball::from_int(2, bits).log()?;
    f.with_precision(bits)
        .sub(&log2)
        .mul_2exp(-(n as i64))
        .exp()
}

/// `h_j(x) = (L - R) / (2 x L)` with `L = p_j p_next > 0` and
/// `R = rhs_factor 2^shift`, so its sign is that of `L - R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HjValue {
    pub j: usize,
    pub x: Rational,
    pub p_j: BigInt,
    pub p_next: BigInt,
    pub rhs_factor: BigInt,
    pub shift: u64,
}

impl HjValue {
    pub fn lhs(&self) -> BigInt {
        &self.p_j * &self.p_next
    }

    pub fn rhs(&self) -> BigInt {
        &self.rhs_factor << self.shift
    }

    /// `L > R`, settled from bit lengths when they differ by more than the
    /// one bit a product can lose, and by the full products otherwise.
    pub fn is_positive(&self) -> bool {
        let l_hi = self.p_j.bits() + self.p_next.bits();
        let r = self.rhs_factor.bits() + self.shift;
        if l_hi - 1 > r {
            return true;
        }
        if l_hi < r {
            return false;
        }
        self.lhs() > self.rhs()
    }

    fn fraction(&self) -> (BigInt, BigInt) {
        let lhs = self.lhs();
        let num = (&lhs - self.rhs()) * self.x.denom();
        let den = (self.x.numer() * lhs) << 1u32;
        (num, den)
    }

    pub fn to_rational(&self) -> Rational {
        let (num, den) = self.fraction();
        Rational::new(num, den).expect("positive denominator")
    }

    pub fn to_ball(&self, digits: u32) -> Result<Ball> {
        let (num, den) = self.fraction();
        Ball::from_ratio(&num, &den, bits_for_digits(digits))
    }

    /// Exact comparison of the values by cross-multiplication. Only
    /// meaningful for the same `x`.
    pub fn cmp_value(&self, other: &HjValue) -> Ordering {
        (other.rhs() * self.lhs()).cmp(&(self.rhs() * other.lhs()))
    }
}

/// `h_1(x), ..., h_{j_max}(x)` for
/// `h_j(x) = 1/(2x) - prod_{k<j} g^k(x) / (g^j(x)^3 + g^j(x))`,
/// `g(y) = (y^2 + 1)/2`.
///
/// Write `y_k = g^k(x) = P_k / Q_k` with `P_{k+1} = P_k^2 + Q_k^2`,
/// `Q_{k+1} = 2 Q_k^2`, so `Q_k = 2^(2^k - 1) Q_0^(2^k)`. Since
/// `y^3 + y = 2 y g(y)`, `h_j > 0` iff `y_j y_{j+1} > x prod_{k<j} y_k`,
/// which clears to `P_j P_{j+1} > P_0 prod_{k<j} P_k Q_0^(2^(j+1)) 2^(2^(j+1) + j - 1)`.
pub fn h_j_sequence(x: &Rational, j_max: usize) -> Result<Vec<HjValue>> {
    if *x < 3 {
        return Err(Error::domain(format!(
            "h_j is evaluated on x >= 3, got {x}"
        )));
    }
    if j_max == 0 || j_max > H_J_MAX {
        return Err(Error::cap("h_j index", j_max, H_J_MAX));
    }
    let (p0, q0) = (x.numer().clone(), x.denom().clone());
    let mut p = p0.clone();
    let mut q = q0.clone();
    // Q_0^(2^j)
    let mut q0_pow = q0.clone();
    let mut prod_p = p0.clone();
    let mut out = Vec::with_capacity(j_max);
    for j in 1..=j_max {
        prod_p *= &p;
        let p_j = &p * &p + &q * &q;
        q = (&q * &q) << 1u32;
        let p_next = &p_j * &p_j + &q * &q;
        q0_pow = &q0_pow * &q0_pow;
        out.push(HjValue {
            j,
            x: x.clone(),
            p_j: p_j.clone(),
            p_next,
            rhs_factor: &prod_p * &q0_pow * &q0_pow,
            shift: (1u64 << (j + 1)) + j as u64 - 1,
        });
        p = p_j;
    }
    Ok(out)
}

pub fn h_j_eval(j: usize, x: &Rational) -> Result<HjValue> {
    if j == 0 {
        return Err(Error::invalid("j must be positive"));
    }
    Ok(h_j_sequence(x, j)?.pop().expect("j >= 1"))
}

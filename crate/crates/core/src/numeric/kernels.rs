//! Fixed-point kernels behind [`Ball::log`] and [`Ball::exp`].
//!
//! Every kernel works on integers scaled by `2^W` and returns its result
//! together with an explicit bound, in units of `2^-W`, on the distance to
//! the true value. All truncations are floors, so each one costs below one
//! unit.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ball::Ball;
use super::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Guard bits carried beyond the requested precision.
const GUARD: u64 = 64;

/// Largest accepted `|x|` for `exp(x)`.
const EXP_ARG_LIMIT_LOG2: i64 = 40;

fn bitlen(v: i64) -> u64 {
    64 - v.unsigned_abs().leading_zeros() as u64
}

/// `ln 2` scaled by `2^w`, with its error bound in units.
///
/// Uses `ln 2 = 2 atanh(1/3) = 2 sum 1 / ((2k+1) 9^k 3)`. The powers
/// `floor(2^w / 3^(2k+1))` are exact floors (iterated floor division by an
/// integer is a single floor), so each term is off by under two units and
/// the dropped tail is under one unit.
pub(crate) fn ln2_fixed(w: u64) -> (BigInt, u64) {
    static CACHE: OnceLock<Mutex<HashMap<u64, (BigInt, u64)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("ln2 cache poisoned").get(&w) {
        return hit.clone();
    }
    let mut p = (BigInt::one() << w) / 3u32;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !p.is_zero() {
        sum += &p / (2 * k + 1);
        p /= 9u32;
        k += 1;
    }
    let out = (sum << 1u32, 2 * (2 * k + 1));
    cache
        .lock()
        .expect("ln2 cache poisoned")
        .insert(w, out.clone());
    out
}

/// Enclosure of `ln x` for an exact positive dyadic `x`.
pub(crate) fn log_point(x: &Dyadic, bits: u32) -> Result<Ball> {
    if !x.is_positive() {
        return Err(Error::domain("log of a nonpositive value"));
    }
    // x = f 2^e with f in [1/sqrt 2, sqrt 2)
    let man_bits = x.mantissa().bits();
    let mut e = x.exponent() + man_bits as i64 - 1;
    let sq = x.mantissa() * x.mantissa();
    if sq > (BigInt::one() << (2 * man_bits - 1)) {
        e += 1;
    }
    let f = x.shl(-e);
    let t = f.sub(&Dyadic::one());
    if t.is_zero() && e == 0 {
        return Ok(Ball::zero(bits));
    }
    // Small |t| means a small result; extend the working precision so the
    // error stays relative.
    let lead = match t.msb() {
        Some(m) if m < 0 => (-m) as u64,
        _ => 0,
    };
    let base = bits as u64 + GUARD + bitlen(e);
    let w = base + lead.min(base);
    let one = BigInt::one() << w;

    let mut err_units: u64 = 0;
    let mut total = BigInt::zero();
    if !t.is_zero() {
        let t_fix = t.to_fixed_floor(w as i64);
        let negative = t_fix.is_negative();
        // y = t / (2 + t), |y| <= 0.18; floors cost below two units of y
        // after propagating the error of t.
        let y = (&t_fix << w) / (&one * 2u32 + &t_fix);
        let y = y.abs();
        let y2 = (&y * &y) >> w;
        let mut p = y;
        let mut s = BigInt::zero();
        let mut k: u64 = 0;
        while !p.is_zero() {
            s += &p / (2 * k + 1);
            p = (&p * &y2) >> w;
            k += 1;
        }
        // Per term: below 2.1 units in the power plus one for the division;
        // tail under 2.2 units; the input error of y is below two units and
        // is amplified by at most 2.1 through 2 atanh.
        err_units += 2 * (8 * k + 16);
        total += if negative { -(s << 1u32) } else { s << 1u32 };
    }
    if e != 0 {
        let (ln2, ln2_err) = ln2_fixed(w);
        total += &ln2 * e;
        err_units += ln2_err * e.unsigned_abs();
    }
    Ok(Ball::from_parts(
        Dyadic::new(total, -(w as i64)),
        Dyadic::new(BigInt::from(err_units), -(w as i64)),
        bits,
    ))
}

/// `exp` of `|r| * 2^-w` (given as the scaled integer) plus its error in
/// units, for `|r| <= 1/2`.
fn exp_series(r_abs: &BigInt, w: u64) -> (BigInt, u64) {
    let one = BigInt::one() << w;
    let mut term = one.clone();
    let mut sum = one;
    let mut j: u64 = 1;
    loop {
        term = ((&term * r_abs) >> w) / j;
        if term.is_zero() {
            break;
        }
        sum += &term;
        j += 1;
    }
    // Each term is within two units of the truth; the dropped tail is at
    // most two units because successive terms at least halve.
    (sum, 8 * j + 16)
}

pub(crate) fn exp_ball(x: &Ball) -> Result<Ball> {
    let bits = x.precision_bits();
    let mid = x.midpoint();
    if let Some(m) = mid.msb() {
        if m >= EXP_ARG_LIMIT_LOG2 {
            return Err(Error::domain("exp argument too large"));
        }
    }
    let k = (mid.to_f64() / std::f64::consts::LN_2).round();
    let k = k
        .to_i64()
        .ok_or_else(|| Error::domain("exp argument too large"))?;
    let w = bits as u64 + GUARD + bitlen(k);
    let one = BigInt::one() << w;
    let (ln2, ln2_err) = ln2_fixed(w);

    // r = mid - k ln 2, within 1 + |k| ln2_err units
    let r = mid.to_fixed_floor(w as i64) - &ln2 * k;
    let r_err = 1 + ln2_err * k.unsigned_abs();
    if r.abs() > (&one >> 1u32) {
        return Err(Error::verification(
            "exp range reduction left a large remainder",
        ));
    }
    let (e_abs, e_err) = exp_series(&r.abs(), w);
    // exp' <= 1.7 on |r| <= 1/2, so the input error costs 2 r_err units.
    let mut err = e_err + 2 * r_err;
    let value = if r.is_negative() {
        // 1/E with E >= 1: the error does not grow, plus one unit of floor.
        err += 1;
        (&one << w) / e_abs
    } else {
        e_abs
    };
    let point_mid = Dyadic::new(value.clone(), k - w as i64);
    let point_rad = Dyadic::new(BigInt::from(err), k - w as i64);

    let rho = x.radius();
    let spread = if rho.is_zero() {
        Dyadic::zero()
    } else {
        // exp(mid) (e^rho - 1) over the interval.
        let hi = Dyadic::new(value + err, k - w as i64);
        let growth = if *rho <= Dyadic::pow2(-2) {
            // e^rho - 1 <= rho e^rho <= 1.3 rho
            rho.mul(&Dyadic::from_int(13))
                .div_up(&Dyadic::from_int(10))?
        } else {
            exp_ball(&Ball::exact(rho.clone(), 64))?
                .upper()
                .sub(&Dyadic::one())
        };
        hi.mul(&growth)
    };
    Ok(Ball::from_parts(point_mid, point_rad.add(&spread), bits))
}

//! Midpoint-radius ("ball") reals with rigorous enclosure semantics.
//!
//! A [`Ball`] stands for the closed interval `[mid - rad, mid + rad]`. Every
//! operation returns a ball that contains the image of every point of its
//! inputs. Midpoints are rounded to the ball's precision and the rounding
//! error is folded into the radius; radii are always rounded upward and kept
//! to a short mantissa.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::dyadic::{parse_decimal, Dyadic};
use super::kernels;
use super::Rational;
use crate::error::{Error, Result};

/// Mantissa width used for radii.
const RAD_BITS: u64 = 32;

/// Smallest accepted working precision.
pub const MIN_PRECISION_BITS: u32 = 8;

#[derive(Clone, PartialEq, Eq)]
pub struct Ball {
    mid: Dyadic,
    rad: Dyadic,
    bits: u32,
}

fn rad_up(d: Dyadic) -> Dyadic {
    debug_assert!(!d.is_negative());
    d.round_up(RAD_BITS)
}

impl Ball {
    /// Build from an exact midpoint and radius; the midpoint is rounded to
    /// `bits` significant bits with the rounding error added to the radius.
    pub fn new(mid: Dyadic, rad: Dyadic, bits: u32) -> Result<Ball> {
        if rad.is_negative() {
            return Err(Error::invalid("ball radius must be nonnegative"));
        }
        if bits < MIN_PRECISION_BITS {
            return Err(Error::invalid(format!(
                "precision must be at least {MIN_PRECISION_BITS} bits, got {bits}"
            )));
        }
        let (mid, err) = mid.round_floor(bits as u64);
        Ok(Ball {
            mid,
            rad: rad_up(rad.add(&err)),
            bits,
        })
    }

    pub(crate) fn from_parts(mid: Dyadic, rad: Dyadic, bits: u32) -> Ball {
        let (mid, err) = mid.round_floor(bits as u64);
        Ball {
            mid,
            rad: rad_up(rad.add(&err)),
            bits,
        }
    }

    pub fn exact(d: Dyadic, bits: u32) -> Ball {
        Ball::from_parts(d, Dyadic::zero(), bits)
    }

    pub fn zero(bits: u32) -> Ball {
        Ball::exact(Dyadic::zero(), bits)
    }

    pub fn one(bits: u32) -> Ball {
        Ball::exact(Dyadic::one(), bits)
    }

    pub fn from_int(n: impl Into<BigInt>, bits: u32) -> Ball {
        Ball::exact(Dyadic::from_int(n), bits)
    }

    /// Enclosure of `num / den` without reducing the fraction first, so huge
    /// unreduced fractions avoid a gcd.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Result<Ball> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if bits < MIN_PRECISION_BITS {
            return Err(Error::invalid(format!(
                "precision must be at least {MIN_PRECISION_BITS} bits, got {bits}"
            )));
        }
        if num.is_zero() {
            return Ok(Ball::zero(bits));
        }
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        let dtz = den.trailing_zeros().unwrap_or(0);
        let den_odd = &den >> dtz;
        if den_odd.is_one() {
            return Ok(Ball::exact(Dyadic::new(num, -(dtz as i64)), bits));
        }
        // Choose the scale so the floored quotient has exactly `bits` bits;
        // then the truncation error 2^-s is at most 2^(1-bits) |num/den|.
        let mut s = bits as i64 + den.bits() as i64 - num.magnitude().bits() as i64;
        loop {
            let man = if s >= 0 {
                (&num << s as u64).div_floor(&den)
            } else {
                num.div_floor(&(&den << (-s) as u64))
            };
            let have = man.magnitude().bits();
            if have > bits as u64 {
                s -= (have - bits as u64) as i64;
                continue;
            }
            if have < bits as u64 {
                s += (bits as u64 - have) as i64;
                continue;
            }
            return Ok(Ball {
                mid: Dyadic::new(man, -s),
                rad: Dyadic::pow2(-s),
                bits,
            });
        }
    }

    /// Enclosure of an exact rational. Dyadic inputs with at most `bits`
    /// significant bits are represented exactly.
    pub fn from_rational(q: &Rational, bits: u32) -> Result<Ball> {
        Ball::from_ratio(q.numer(), q.denom(), bits)
    }

    pub fn midpoint(&self) -> &Dyadic {
        &self.mid
    }

    pub fn radius(&self) -> &Dyadic {
        &self.rad
    }

    pub fn precision_bits(&self) -> u32 {
        self.bits
    }

    pub fn with_precision(&self, bits: u32) -> Ball {
        Ball::from_parts(self.mid.clone(), self.rad.clone(), bits)
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        (q - self.mid.to_rational()).abs() <= self.rad.to_rational()
    }

    pub fn contains_dyadic(&self, d: &Dyadic) -> bool {
        d.sub(&self.mid).abs() <= self.rad
    }

    /// True if `other` lies entirely inside `self`.
    pub fn contains(&self, other: &Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn strictly_below(&self, other: &Ball) -> bool {
        self.upper() < other.lower()
    }

    pub fn is_positive(&self) -> bool {
        self.lower().is_positive()
    }

    /// Radius no larger than `10^-digits`.
    pub fn radius_within_digits(&self, digits: u32) -> bool {
        let bound =
            Rational::new(1, num_traits::pow(BigInt::from(10), digits as usize)).expect("nonzero");
        self.rad.to_rational() <= bound
    }

    fn result_bits(&self, other: &Ball) -> u32 {
        self.bits.max(other.bits)
    }

    pub fn add(&self, other: &Ball) -> Ball {
        Ball::from_parts(
            self.mid.add(&other.mid),
            self.rad.add(&other.rad),
            self.result_bits(other),
        )
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        Ball::from_parts(
            self.mid.sub(&other.mid),
            self.rad.add(&other.rad),
            self.result_bits(other),
        )
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
            bits: self.bits,
        }
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        // |xy - ab| <= |a| r_y + |b| r_x + r_x r_y
        let rad = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        Ball::from_parts(self.mid.mul(&other.mid), rad, self.result_bits(other))
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_2exp(&self, k: i64) -> Ball {
        Ball {
            mid: self.mid.shl(k),
            rad: self.rad.shl(k),
            bits: self.bits,
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> Ball {
        self.mul(&Ball::exact(Dyadic::from_int(n.clone()), self.bits))
    }

    pub fn div(&self, other: &Ball) -> Result<Ball> {
        let b_abs = other.mid.abs();
        if b_abs <= other.rad {
            return Err(Error::domain("division by a ball that contains zero"));
        }
        let bits = self.result_bits(other);
        // Midpoint quotient, floored to bits + 2 significant bits.
        let (quot, quot_err) = if self.mid.is_zero() {
            (Dyadic::zero(), Dyadic::zero())
        } else {
            let s = bits as i64 + 2 + other.mid.bits() as i64 - self.mid.bits() as i64;
            let num = if s >= 0 {
                self.mid.mantissa() << s as u64
            } else {
                self.mid.mantissa() >> (-s) as u64
            };
            let trunc_err = if s >= 0 {
                Dyadic::zero()
            } else {
                Dyadic::pow2(self.mid.exponent()).shl(-s)
            };
            let man = num.div_floor(other.mid.mantissa());
            let exp = self.mid.exponent() - other.mid.exponent() - s;
            // floor error below one unit, plus the dropped numerator bits
            // scaled by 1/|b|
            let err = Dyadic::pow2(exp).add(&trunc_err.div_up(&b_abs)?);
            (Dyadic::new(man, exp), err)
        };
        // |x/y - a/b| <= (|a| r_y + |b| r_x) / (|b| (|b| - r_y))
        let num = self.mid.abs().mul(&other.rad).add(&b_abs.mul(&self.rad));
        let den = b_abs.mul(&b_abs.sub(&other.rad));
        let prop = num.div_up(&den)?;
        Ok(Ball::from_parts(quot, prop.add(&quot_err), bits))
    }

    pub fn recip(&self) -> Result<Ball> {
        Ball::one(self.bits).div(self)
    }

    /// Natural logarithm. The whole interval must be positive.
    ///
    /// Error bound: the point kernel at the midpoint is within
    /// `(16K + 32) 2^-W` plus `|e|` times the `ln 2` error, where `K` is the
    /// number of series terms and `W = bits + 64 + bitlen(e)`; the radius then
    /// grows by `rad / lower`, the derivative bound over the interval.
    pub fn log(&self) -> Result<Ball> {
        let lo = self.lower();
        if !lo.is_positive() {
            return Err(Error::domain("log of a ball that is not entirely positive"));
        }
        let point = kernels::log_point(&self.mid, self.bits)?;
        let spread = self.rad.div_up(&lo)?;
        Ok(Ball::from_parts(
            point.mid,
            point.rad.add(&spread),
            self.bits,
        ))
    }

    /// `log(1 + x)`, accurate in relative terms for small `x`. The whole
    /// interval must lie above -1.
    pub fn log1p(&self) -> Result<Ball> {
        let one_plus_lo = Dyadic::one().add(&self.lower());
        if !one_plus_lo.is_positive() {
            return Err(Error::domain("log1p of a ball touching -1"));
        }
        let point = kernels::log_point(&Dyadic::one().add(&self.mid), self.bits)?;
        let spread = self.rad.div_up(&one_plus_lo)?;
        Ok(Ball::from_parts(
            point.mid,
            point.rad.add(&spread),
            self.bits,
        ))
    }

    /// Exponential.
    ///
    /// Error bound: after reducing by `k ln 2`, the Taylor kernel is within
    /// `(8K + 16) 2^-W` for `K` terms; the reduced radius `rho` contributes
    /// `exp(r) (e^rho - 1)`, bounded by `2 rho exp(r)` for `rho <= 1/4`.
    pub fn exp(&self) -> Result<Ball> {
        kernels::exp_ball(self)
    }

    /// `x^(2^-n)` for a positive ball, via `exp(log(x) / 2^n)`.
    pub fn root_pow2(&self, n: u32) -> Result<Ball> {
        self.log()?.mul_2exp(-(n as i64)).exp()
    }

    /// Symmetric hull of two balls.
    pub fn hull(&self, other: &Ball) -> Ball {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        let mid = lo.add(&hi).shl(-1);
        let rad = hi.sub(&mid).max(mid.sub(&lo));
        Ball::from_parts(mid, rad, self.result_bits(other))
    }

    /// Add `[-r, r]` to the ball.
    pub fn inflate(&self, r: &Dyadic) -> Ball {
        Ball {
            mid: self.mid.clone(),
            rad: rad_up(self.rad.add(&r.abs())),
            bits: self.bits,
        }
    }

    /// Render the midpoint to `places` decimals.
    pub fn to_decimal(&self, places: u32) -> String {
        self.mid.to_decimal_rounded(places)
    }

    /// `Some(s)` if every point of the ball rounds to the same `places`-digit
    /// decimal `s`.
    pub fn rounds_uniquely(&self, places: u32) -> Option<String> {
        let lo = self.lower().to_decimal_rounded(places);
        let hi = self.upper().to_decimal_rounded(places);
        (lo == hi).then_some(lo)
    }

    #[cfg(test)]
    pub(crate) fn raw(mid: Dyadic, rad: Dyadic, bits: u32) -> Ball {
        Ball {
            mid,
            rad: rad_up(rad),
            bits,
        }
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} +/- {:.3e}] ({} bits)",
            self.mid.to_decimal_rounded(20),
            self.rad.to_f64(),
            self.bits
        )
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = ((self.bits as f64) * std::f64::consts::LOG10_2).floor() as u32;
        write!(
            f,
            "{} +/- {:.3e}",
            self.mid.to_decimal_rounded(places),
            self.rad.to_f64()
        )
    }
}

impl PartialOrd for Ball {
    /// Defined only for disjoint balls.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.strictly_below(other) {
            Some(Ordering::Less)
        } else if other.strictly_below(self) {
            Some(Ordering::Greater)
        } else if self == other && self.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

#[derive(Serialize, Deserialize)]
struct BallRepr {
    mid: String,
    rad: String,
    bits: u32,
}

impl Serialize for Ball {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BallRepr {
            mid: self.mid.to_decimal_exact(),
            rad: self.rad.to_scientific_exact(),
            bits: self.bits,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Ball {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = BallRepr::deserialize(deserializer)?;
        ball_from_strings(&repr.mid, &repr.rad, repr.bits).map_err(de::Error::custom)
    }
}

/// Parse decimal midpoint and radius strings. Values that are not dyadic are
/// rounded outward.
pub fn ball_from_strings(mid: &str, rad: &str, bits: u32) -> Result<Ball> {
    let mid_q = parse_decimal(mid)?;
    let rad_q = parse_decimal(rad)?;
    if rad_q.is_negative() {
        return Err(Error::invalid("ball radius must be nonnegative"));
    }
    let rad_d = Dyadic::from_rational_up(&rad_q, RAD_BITS);
    let base = match Dyadic::from_rational_exact(&mid_q) {
        Some(d) => Ball::new(d, Dyadic::zero(), bits)?,
        None => Ball::from_rational(&mid_q, bits)?,
    };
    Ok(base.inflate(&rad_d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::q;

    fn two_pow(k: i64) -> Rational {
        Dyadic::pow2(k).to_rational()
    }

    #[test]
    fn dyadic_rationals_are_exact() {
        let b = Ball::from_rational(&q("1/2"), 64).unwrap();
        assert!(b.is_exact());
        assert_eq!(b.midpoint().to_decimal_exact(), "0.5");
        let b = Ball::from_rational(&q("-3/8"), 64).unwrap();
        assert!(b.is_exact());
    }

    #[test]
    fn from_rational_contract() {
        for (s, bits) in [
            ("1/3", 64u32),
            ("19/20", 128),
            ("-22/7", 40),
            ("1000001/3", 20),
            ("1/1000003", 16),
        ] {
            let r = q(s);
            let b = Ball::from_rational(&r, bits).unwrap();
            assert!(b.contains_rational(&r), "{s}");
            let bound = two_pow(1 - bits as i64) * std::cmp::max(Rational::one(), r.abs());
            assert!(b.radius().to_rational() <= bound, "{s} at {bits}");
        }
    }

    #[test]
    fn huge_integer_rounds_within_contract() {
        let n: BigInt = num_traits::pow(BigInt::from(3), 500);
        let r = Rational::from_integer(n);
        let b = Ball::from_rational(&r, 64).unwrap();
        assert!(b.contains_rational(&r));
        assert!(b.radius().to_rational() <= two_pow(-63) * r.clone());
    }

    #[test]
    fn arithmetic_encloses() {
        let bits = 40;
        let xs = ["1/3", "-5/7", "22/7", "1/1000", "12345/11"];
        for a in xs {
            for b in xs {
                let (qa, qb) = (q(a), q(b));
                let (ba, bb) = (
                    Ball::from_rational(&qa, bits).unwrap(),
                    Ball::from_rational(&qb, bits).unwrap(),
                );
                assert!(ba.add(&bb).contains_rational(&(&qa + &qb)));
                assert!(ba.sub(&bb).contains_rational(&(&qa - &qb)));
                assert!(ba.mul(&bb).contains_rational(&(&qa * &qb)));
                assert!(
                    ba.div(&bb).unwrap().contains_rational(&(&qa / &qb)),
                    "{a} / {b}"
                );
            }
        }
    }

    #[test]
    fn division_by_ball_containing_zero_fails() {
        let z = Ball::raw(Dyadic::zero(), Dyadic::pow2(-3), 32);
        assert!(Ball::one(32).div(&z).is_err());
    }

    #[test]
    fn log_exp_basics() {
        let l = Ball::one(64).log().unwrap();
        assert!(l.contains_rational(&Rational::zero()));
        let e = Ball::zero(64).exp().unwrap();
        assert!(e.contains_rational(&Rational::one()));
        assert!(Ball::zero(64).log().is_err());
        assert!(Ball::from_int(-1, 64).log1p().is_err());
    }

    #[test]
    fn log_matches_known_digits() {
        // ln 10 = 2.302585092994045684017991454684364207601...
        let l = Ball::from_int(10, 200).log().unwrap();
        assert_eq!(
            l.rounds_uniquely(40).unwrap(),
            "2.3025850929940456840179914546843642076011"
        );
        // e = 2.718281828459045235360287471352662497757...
        let e = Ball::one(200).exp().unwrap();
        assert_eq!(
            e.rounds_uniquely(40).unwrap(),
            "2.7182818284590452353602874713526624977572"
        );
    }

    #[test]
    fn exp_log_round_trip() {
        for s in ["1/3", "7", "1/1000", "123456789/1000", "-5/2"] {
            let x = Ball::from_rational(&q(s), 160).unwrap();
            let y = x.exp().unwrap().log().unwrap();
            assert!(y.overlaps(&x), "{s}: {y:?} vs {x:?}");
            assert!(y.radius().to_f64() < 1e-40, "{s}");
        }
    }

    #[test]
    fn log1p_small_argument_keeps_relative_precision() {
        let x = Ball::from_rational(&q("1/1000000000000000000000000000000"), 128).unwrap();
        let l = x.log1p().unwrap();
        // log1p(x) = x - x^2/2 + ..., so the value sits just below x
        let xq = q("1/1000000000000000000000000000000");
        assert!(l.upper().to_rational() <= xq);
        assert!(l.lower().to_rational() >= &xq - &xq * &xq);
        assert!(l.radius().to_f64() < 1e-60);
    }

    #[test]
    fn serde_round_trip_is_lossless() {
        let b = Ball::from_rational(&q("19/20"), 128).unwrap();
        let json = serde_json::to_string(&b).unwrap();
        let back: Ball = serde_json::from_str(&json).unwrap();
        assert_eq!(back, b);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    #[test]
    fn hull_contains_both() {
        let a = Ball::from_rational(&q("1/3"), 64).unwrap();
        let b = Ball::from_rational(&q("2/3"), 64).unwrap();
        let h = a.hull(&b);
        assert!(h.contains(&a) && h.contains(&b));
    }
}

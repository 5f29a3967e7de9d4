//! Dyadic rationals `man * 2^exp`, the carrier for ball midpoints and radii.
//!
//! Values are kept normalized (odd mantissa, or zero with exponent zero) so
//! that structural equality is numeric equality and exact decimal rendering
//! is canonical.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Dyadic::zero();
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { man, exp }
        } else {
            Dyadic {
                man: man >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::new(BigInt::one(), 0)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic::new(BigInt::one(), k)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// `floor(log2 |x|)`; `None` for zero.
    pub fn msb(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.exp + self.man.bits() as i64 - 1)
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            man: -&self.man,
            exp: self.exp,
        }
    }

    /// Multiply by `2^k`, exactly.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.exp.min(b.exp);
        let am = &a.man << (a.exp - e) as u64;
        let bm = &b.man << (b.exp - e) as u64;
        (am, bm, e)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Dyadic::aligned(self, other);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            man: &self.man * &other.man,
            exp: self.exp + other.exp,
        }
    }

    /// Integer part of `x * 2^k`, rounded toward negative infinity.
    pub fn to_fixed_floor(&self, k: i64) -> BigInt {
        let shift = self.exp + k;
        if shift >= 0 {
            &self.man << shift as u64
        } else {
            // BigInt's right shift floors for negative values.
            &self.man >> (-shift) as u64
        }
    }

    /// Round toward negative infinity to at most `bits` significant bits.
    /// Returns the rounded value and a strict upper bound on the error.
    pub fn round_floor(&self, bits: u64) -> (Dyadic, Dyadic) {
        let have = self.man.bits();
        if have <= bits {
            return (self.clone(), Dyadic::zero());
        }
        let shift = have - bits;
        let man = &self.man >> shift;
        let exp = self.exp + shift as i64;
        (Dyadic::new(man, exp), Dyadic::pow2(exp))
    }

    /// Smallest dyadic `>= self` with at most `bits` significant bits.
    pub fn round_up(&self, bits: u64) -> Dyadic {
        let have = self.man.bits();
        if have <= bits {
            return self.clone();
        }
        let shift = have - bits;
        let floored = &self.man >> shift;
        let exact = (&floored << shift) == self.man;
        let man = if exact { floored } else { floored + 1u32 };
        Dyadic::new(man, self.exp + shift as i64)
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.man << self.exp as u64)
        } else {
            Rational::new(self.man.clone(), BigInt::one() << (-self.exp) as u64)
                .expect("power of two is nonzero")
        }
    }

    /// The value if the rational is dyadic, else `None`.
    pub fn from_rational_exact(q: &Rational) -> Option<Dyadic> {
        let d = q.denom();
        let tz = d.trailing_zeros().unwrap_or(0);
        if (d >> tz).is_one() {
            Some(Dyadic::new(q.numer().clone(), -(tz as i64)))
        } else {
            None
        }
    }

    /// Upper bound for `q` with roughly `bits` significant bits.
    pub fn from_rational_up(q: &Rational, bits: u64) -> Dyadic {
        if let Some(d) = Dyadic::from_rational_exact(q) {
            return d.round_up(bits);
        }
        let (num, den) = (q.numer(), q.denom());
        let s = bits as i64 + den.bits() as i64 - num.magnitude().bits() as i64 + 1;
        let scaled = if s >= 0 { num << s as u64 } else { num.clone() };
        let den = if s >= 0 {
            den.clone()
        } else {
            den << (-s) as u64
        };
        let man = -((-scaled).div_floor(&den));
        Dyadic::new(man, -s)
    }

    /// Upper bound on `self / other` for positive operands, about 32 bits.
    pub fn div_up(&self, other: &Dyadic) -> Result<Dyadic> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Dyadic::zero());
        }
        let s = 34 + other.man.bits() as i64 - self.man.bits() as i64;
        let num = if s >= 0 {
            &self.man << s as u64
        } else {
            (&self.man >> (-s) as u64) + 1u32
        };
        let (quo, rem) = num.div_mod_floor(&other.man);
        let quo = if rem.is_zero() { quo } else { quo + 1u32 };
        Ok(Dyadic::new(quo, self.exp - other.exp - s))
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.man >> shift as u64).to_f64().unwrap_or(f64::NAN);
        let e = self.exp + shift;
        if e > 1100 {
            return top.signum() * f64::INFINITY;
        }
        if e < -1200 {
            return 0.0;
        }
        top * 2f64.powi(e as i32)
    }

    /// Exact decimal expansion (dyadics always terminate in base 10).
    pub fn to_decimal_exact(&self) -> String {
        if self.exp >= 0 {
            return (&self.man << self.exp as u64).to_string();
        }
        let k = (-self.exp) as usize;
        let digits = (self.man.magnitude() * num_traits::pow(num_bigint::BigUint::from(5u32), k))
            .to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        let (int_part, frac_part) = if digits.len() > k {
            let (a, b) = digits.split_at(digits.len() - k);
            (a.to_string(), b.to_string())
        } else {
            (
                "0".to_string(),
                format!("{}{}", "0".repeat(k - digits.len()), digits),
            )
        };
        let frac = frac_part.trim_end_matches('0');
        if frac.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    }

    /// Exact value in scientific notation, e.g. `1.25e-3`.
    pub fn to_scientific_exact(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let (digits, pow10) = if self.exp >= 0 {
            ((self.man.magnitude() << self.exp as u64).to_string(), 0i64)
        } else {
            let k = (-self.exp) as usize;
            let d = (self.man.magnitude() * num_traits::pow(num_bigint::BigUint::from(5u32), k))
                .to_string();
            (d, -(k as i64))
        };
        let trimmed = digits.trim_end_matches('0');
        let pow10 = pow10 + (digits.len() - trimmed.len()) as i64;
        let e = pow10 + trimmed.len() as i64 - 1;
        let sign = if self.is_negative() { "-" } else { "" };
        let (lead, rest) = trimmed.split_at(1);
        if rest.is_empty() {
            format!("{sign}{lead}e{e}")
        } else {
            format!("{sign}{lead}.{rest}e{e}")
        }
    }

    /// Round to `places` decimal places (half away from zero) and render.
    pub fn to_decimal_rounded(&self, places: u32) -> String {
        let scale = num_traits::pow(BigInt::from(10), places as usize);
        let q = self.to_rational().abs() * Rational::from_integer(scale);
        let n = (q + crate::numeric::rational::q("1/2")).floor();
        let s = n.to_string();
        let places = places as usize;
        let sign = if self.is_negative() && !n.is_zero() {
            "-"
        } else {
            ""
        };
        if places == 0 {
            return format!("{sign}{s}");
        }
        let padded = if s.len() <= places {
            format!("{}{}", "0".repeat(places + 1 - s.len()), s)
        } else {
            s
        };
        let (a, b) = padded.split_at(padded.len() - places);
        format!("{sign}{a}.{b}")
    }
}

/// Exact rational value of a decimal literal like `-1.25e-3` or `42`.
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a decimal number: {s:?}"));
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut n: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        n = -n;
    }
    let e = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    if e >= 0 {
        Ok(Rational::from_integer(n * num_traits::pow(ten, e as usize)))
    } else {
        Rational::new(n, num_traits::pow(ten, (-e) as usize))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.signum().cmp(&other.signum()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (a, b, _) = Dyadic::aligned(self, other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.man, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_exact())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::q;

    #[test]
    fn normalizes_trailing_zeros() {
        let d = Dyadic::new(BigInt::from(12), 0);
        assert_eq!(d.mantissa(), &BigInt::from(3));
        assert_eq!(d.exponent(), 2);
        assert_eq!(Dyadic::new(BigInt::zero(), 17), Dyadic::zero());
    }

    #[test]
    fn shift_floors_negative_values() {
        // the rounding code relies on this
        assert_eq!(BigInt::from(-5) >> 1u32, BigInt::from(-3));
    }

    #[test]
    fn round_floor_bounds_error() {
        let x = Dyadic::new(BigInt::from(0b1011_0111), -3);
        let (r, err) = x.round_floor(4);
        assert!(r <= x);
        assert!(x.sub(&r) < err);
        let neg = x.neg();
        let (r, err) = neg.round_floor(4);
        assert!(r <= neg);
        assert!(neg.sub(&r) < err);
    }

    #[test]
    fn round_up_is_upper_bound() {
        let x = Dyadic::new(BigInt::from(0b1011_0111), -3);
        let r = x.round_up(3);
        assert!(r >= x);
        assert!(r.bits() <= 3);
        assert_eq!(Dyadic::pow2(5).round_up(1), Dyadic::pow2(5));
    }

    #[test]
    fn exact_decimal_rendering() {
        assert_eq!(Dyadic::new(BigInt::from(5), -1).to_decimal_exact(), "2.5");
        assert_eq!(
            Dyadic::new(BigInt::from(-1), -3).to_decimal_exact(),
            "-0.125"
        );
        assert_eq!(Dyadic::new(BigInt::from(3), 2).to_decimal_exact(), "12");
        assert_eq!(
            Dyadic::new(BigInt::from(1), -3).to_scientific_exact(),
            "1.25e-1"
        );
        assert_eq!(
            Dyadic::new(BigInt::from(3), 2).to_scientific_exact(),
            "1.2e1"
        );
        assert_eq!(Dyadic::from_int(100).to_scientific_exact(), "1e2");
    }

    #[test]
    fn decimal_parse_is_exact() {
        assert_eq!(parse_decimal("2.5").unwrap(), q("5/2"));
        assert_eq!(parse_decimal("-1.25e-1").unwrap(), q("-1/8"));
        assert_eq!(parse_decimal("1e2").unwrap(), q("100"));
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("e5").is_err());
        for d in [
            Dyadic::new(BigInt::from(-12345), -40),
            Dyadic::pow2(-200),
            Dyadic::from_int(77),
        ] {
            assert_eq!(
                parse_decimal(&d.to_decimal_exact()).unwrap(),
                d.to_rational()
            );
            assert_eq!(
                parse_decimal(&d.to_scientific_exact()).unwrap(),
                d.to_rational()
            );
        }
    }

    #[test]
    fn rounded_decimal() {
        let x = Dyadic::from_rational_up(&q("1264084735/1000000000"), 80);
        assert_eq!(x.to_decimal_rounded(6), "1.264085");
        assert_eq!(
            Dyadic::new(BigInt::from(-1), -2).to_decimal_rounded(1),
            "-0.3"
        );
        assert_eq!(
            Dyadic::new(BigInt::from(1), -10).to_decimal_rounded(2),
            "0.00"
        );
    }

    #[test]
    fn div_up_is_upper_bound() {
        let a = Dyadic::from_int(1);
        let b = Dyadic::from_int(3);
        let d = a.div_up(&b).unwrap();
        assert!(d.to_rational() >= q("1/3"));
        assert!(d.to_rational() - q("1/3") < q("1/1000000000"));
    }

    #[test]
    fn from_rational_up_bounds() {
        for s in ["1/3", "-1/3", "22/7", "-22/7", "1/1000003"] {
            let r = q(s);
            let d = Dyadic::from_rational_up(&r, 40);
            assert!(d.to_rational() >= r, "{s}");
            assert!(
                (d.to_rational() - &r).abs() <= r.abs() * q("1/1000000000"),
                "{s}"
            );
        }
    }
}

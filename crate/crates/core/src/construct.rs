//! Comparison sequence `c_n` built from a competitor `a_n` with reciprocal
//! sum 1, and the exact checks it rests on.
//!
//! With `m` the first index where `a` leaves Sylvester's sequence `u`,
//! `c_i = u_i` for `i < m`, then three explicit terms, then the greedy
//! underapproximation of the unit fraction that remains.

use num_bigint::BigInt;
use serde::Serialize;

use crate::egyptian::{greedy_under_step, SeqSpec};
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::sylvester::sylvester_terms;
use crate::DEFAULT_TERM_CAP;

/// Sylvester's sequence `u_1..u_n` as integers.
fn sylvester_ints(n: usize) -> Result<Vec<Rational>> {
    sylvester_terms(&Rational::from(2), n, n.max(DEFAULT_TERM_CAP))
}

fn check_claim_cap(m: usize, claim_cap: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    if m > claim_cap {
        return Err(Error::cap("divergence index", m, claim_cap));
    }
    Ok(())
}

/// First index `m` with `a_i = u_i` for `i < m` and `a_m > u_m`, searched up
/// to `claim_cap`.
pub fn find_divergence_m(a: &SeqSpec, claim_cap: usize) -> Result<usize> {
    if *a.target() != 1 {
        return Err(Error::invalid(format!(
            "reciprocal sum must be 1, got {}",
            a.target()
        )));
    }
    let terms = a.terms(claim_cap, claim_cap.max(DEFAULT_TERM_CAP))?;
    let u = sylvester_ints(claim_cap)?;
    for (i, t) in terms.iter().enumerate() {
        if !t.is_integer() {
            return Err(Error::invalid(format!(
                "term {} is not an integer: {t}",
                i + 1
            )));
        }
        if i > 0 && *t <= terms[i - 1] {
            return Err(Error::invalid(format!(
                "sequence is not strictly increasing at term {}",
                i + 1
            )));
        }
        if *t != u[i] {
            let m = i + 1;
            if *t < &u[i] + Rational::one() {
                return Err(Error::invalid(format!(
                    "term {m} is {t}, below the Sylvester term {}; the sequence cannot continue with sum 1",
                    u[i]
                )));
            }
            return Ok(m);
        }
    }
    Err(Error::cap("divergence index", claim_cap + 1, claim_cap))
}

/// `c_m, c_{m+1}, c_{m+2}` from `u_m`.
pub fn window_terms(m: usize, u_m: &Rational) -> [Rational; 3] {
    let one = Rational::one();
    let two = Rational::from(2);
    let sq = u_m * u_m;
    if m == 1 {
        [
            u_m.clone(),
            sq.clone(),
            (&sq * u_m * (u_m - &one) + &one) / &two,
        ]
    } else {
        [u_m + &one, &sq / &two, (&sq * (&sq - &one) + &two) / &two]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claims {
    pub claim1_ok: bool,
    pub claim2_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionResult {
    pub divergence_m: usize,
    pub c_spec: SeqSpec,
    pub remainder_unit_fraction: Rational,
    pub claims: Claims,
}

/// Everything the two claims compute for one `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub m: usize,
    pub u_m: Rational,
    pub window: [Rational; 3],
    /// `1/(u_m - 1) - 1/c_m - 1/c_{m+1} - 1/c_{m+2}`.
    pub remainder: Rational,
    /// `sum_{i=m}^{m+2} (1/u_i - 1/c_i)`.
    pub window_difference: Rational,
    /// The factored rational function at `u_m`, for `m > 1`.
    pub closed_form: Option<Rational>,
    pub claim1_ok: bool,
    pub claim2_ok: bool,
}

pub fn check_claims(m: usize, claim_cap: usize) -> Result<ClaimReport> {
    check_claim_cap(m, claim_cap)?;
    let u = sylvester_ints(m + 2)?;
    let u_m = u[m - 1].clone();
    let window = window_terms(m, &u_m);
    let one = Rational::one();
    let remainder = (&u_m - &one).recip()? - Rational::reciprocal_sum(&window)?;
    let product = (&u_m - &one) * &window[0] * &window[1] * &window[2];
    let claim1_ok = remainder == product.recip()? && remainder.is_unit_fraction();

    let window_difference =
        Rational::reciprocal_sum(&u[m - 1..m + 2])? - Rational::reciprocal_sum(&window)?;
    let mut claim2_ok = window_difference.is_positive();
    let closed_form = if m > 1 {
        let f = f_closed_form(&u_m)?;
        claim2_ok &= f == window_difference && f.is_positive();
        Some(f)
    } else {
        None
    };
    Ok(ClaimReport {
        m,
        u_m,
        window,
        remainder,
        window_difference,
        closed_form,
        claim1_ok,
        claim2_ok,
    })
}

pub fn verify_claim1(m: usize, claim_cap: usize) -> Result<bool> {
    Ok(check_claims(m, claim_cap)?.claim1_ok)
}

pub fn verify_claim2(m: usize, claim_cap: usize) -> Result<bool> {
    Ok(check_claims(m, claim_cap)?.claim2_ok)
}

/// `1/x + 1/(x^2-x+1) + 1/((x^2-x+1)(x^2-x)+1) - 1/(x+1) - 2/x^2 - 2/(x^2(x^2-1)+2)`.
pub fn f_defining_difference(x: &Rational) -> Result<Rational> {
    let one = Rational::one();
    let two = Rational::from(2);
    let sq = x * x;
    let s1 = &sq - x + &one;
    let s2 = &s1 * (&sq - x) + &one;
    Ok(x.recip()? + s1.recip()? + s2.recip()?
        - (x + &one).recip()?
        - two.checked_div(&sq)?
        - two.checked_div(&(&sq * (&sq - &one) + &two))?)
}

/// `(x-2)(3x^4-4x^3+3x^2-2x+2) / (x^2 (x+1)(x^2-x+1)(x^4-x^2+2)(x^4-2x^3+2x^2-x+1))`.
pub fn f_closed_form(x: &Rational) -> Result<Rational> {
    let p = |coeffs: &[i64]| -> Rational {
        coeffs
            .iter()
            .fold(Rational::zero(), |acc, &c| acc * x + Rational::from(c))
    };
    let num = p(&[1, -2]) * p(&[3, -4, 3, -2, 2]);
    let den =
        p(&[1, 0, 0]) * p(&[1, 1]) * p(&[1, -1, 1]) * p(&[1, 0, -1, 0, 2]) * p(&[1, -2, 2, -1, 1]);
    num.checked_div(&den)
}

/// Both forms agree at every point; needs at least 12 distinct points.
pub fn verify_f_identity(points: &[Rational]) -> Result<bool> {
    let mut distinct = points.to_vec();
    distinct.sort();
    distinct.dedup();
    if distinct.len() < 12 {
        return Err(Error::invalid(format!(
            "need at least 12 distinct points, got {}",
            distinct.len()
        )));
    }
    for x in &distinct {
        let lhs = f_defining_difference(x).map_err(|_| Error::domain(format!("{x} is a pole")))?;
        if lhs != f_closed_form(x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn build_c(a: &SeqSpec, claim_cap: usize) -> Result<ConstructionResult> {
    let m = find_divergence_m(a, claim_cap)?;
    let report = check_claims(m, claim_cap)?;
    if !report.claim1_ok {
        return Err(Error::verification(format!(
            "remainder at m = {m} is not a unit fraction"
        )));
    }
    let u = sylvester_ints(m)?;
    let mut prefix: Vec<Rational> = u[..m - 1].to_vec();
    prefix.extend(report.window.iter().cloned());
    let next = greedy_under_step(&report.remainder, &BigInt::from(0))?;
    prefix.push(Rational::from(next));
    let c_spec = SeqSpec::with_sylvester_tail(prefix)?;
    if *c_spec.target() != 1 {
        return Err(Error::verification(format!(
            "c sums to {}, not 1",
            c_spec.target()
        )));
    }
    Ok(ConstructionResult {
        divergence_m: m,
        c_spec,
        remainder_unit_fraction: report.remainder,
        claims: Claims {
            claim1_ok: report.claim1_ok,
            claim2_ok: report.claim2_ok,
        },
    })
}

/// `sum_{i<=k} 1/a_i <= sum_{i<=k} 1/c_i` for `k >= m`.
pub fn lemma31_check(
    a: &SeqSpec,
    c: &ConstructionResult,
    k: usize,
    term_cap: usize,
) -> Result<bool> {
    if k < c.divergence_m {
        return Err(Error::invalid(format!(
            "k = {k} is below the divergence index {}",
            c.divergence_m
        )));
    }
    Ok(a.partial_sum(k, term_cap)? <= c.c_spec.partial_sum(k, term_cap)?)
}

/// Test competitor: `u_1..u_{s-1}`, then `u_s + delta`, then the smallest
/// denominators above the previous one until the greedy choice clears it,
/// then the greedy tail of what is left of 1.
pub fn competitor(s: usize, delta: u64, claim_cap: usize) -> Result<SeqSpec> {
    check_claim_cap(s, claim_cap)?;
    if delta == 0 {
        return Err(Error::invalid("delta must be positive"));
    }
    let u = sylvester_ints(s)?;
    let mut prefix: Vec<Rational> = u[..s - 1].to_vec();
    prefix.push(&u[s - 1] + Rational::from(delta as i64));
    let one = Rational::one();
    loop {
        let rest = &one - Rational::reciprocal_sum(&prefix)?;
        let last = prefix
            .last()
            .expect("nonempty")
            .to_integer()
            .expect("integral");
        let greedy = rest.recip()?.floor() + 1u32;
        if greedy > last {
            break;
        }
        prefix.push(Rational::from(last + 1u32));
    }
    SeqSpec::with_greedy_tail(prefix, one)
}

/// `s` in `1..=max_s` and `delta` in `{1, 2, 5}`.
pub fn competitor_family(max_s: usize, claim_cap: usize) -> Result<Vec<SeqSpec>> {
    let mut out = Vec::new();
    for s in 1..=max_s {
        for delta in [1, 2, 5] {
            out.push(competitor(s, delta, claim_cap)?);
        }
    }
    Ok(out)
}

//! Sylvester-type recurrences `x -> x^2 - x + 1` and their telescoping sums.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::egyptian::greedy_under_from;
use crate::error::{Error, Result};
use crate::numeric::Rational;

/// Lazily extended orbit of `x -> x^2 - x + 1` from a rational seed.
///
/// Extension needs `&mut self`, so it is confined to the owner; shared
/// references only read materialized terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SylvesterLikeSeq {
    terms: Vec<Rational>,
}

impl SylvesterLikeSeq {
    pub fn new(seed: Rational) -> Result<Self> {
        if seed < 2 {
            return Err(Error::invalid(format!(
                "seed must be at least 2, got {seed}"
            )));
        }
        Ok(SylvesterLikeSeq { terms: vec![seed] })
    }

    pub fn seed(&self) -> &Rational {
        &self.terms[0]
    }

    pub fn materialized(&self) -> &[Rational] {
        &self.terms
    }

    /// Materialize the first `n` terms.
    pub fn extend_to(&mut self, n: usize, cap: usize) -> Result<&[Rational]> {
        if n > cap {
            return Err(Error::cap("sylvester term", n, cap));
        }
        while self.terms.len() < n {
            let next = self.terms.last().expect("seeded").sylvester_step();
            self.terms.push(next);
        }
        Ok(&self.terms[..n])
    }

    /// 1-based term access.
    pub fn term(&mut self, i: usize, cap: usize) -> Result<&Rational> {
        if i == 0 {
            return Err(Error::invalid("terms are indexed from 1"));
        }
        Ok(&self.extend_to(i, cap)?[i - 1])
    }
}

pub fn sylvester_terms(seed: &Rational, n: usize, cap: usize) -> Result<Vec<Rational>> {
    if n == 0 {
        return Err(Error::invalid("number of terms must be positive"));
    }
    let mut seq = SylvesterLikeSeq::new(seed.clone())?;
    Ok(seq.extend_to(n, cap)?.to_vec())
}

/// First `n` terms of the greedy underapproximation of `1/t`, checked
/// against both `w_{k+1} = 1 + t w_1 ... w_k` and `w_{k+1} = w_k^2 - w_k + 1`.
pub fn unit_tail(t: &BigInt, n: usize, cap: usize) -> Result<Vec<BigInt>> {
    if !t.is_positive() {
        return Err(Error::invalid(format!(
            "t must be a positive integer, got {t}"
        )));
    }
    if n == 0 {
        return Err(Error::invalid("number of terms must be positive"));
    }
    if n > cap {
        return Err(Error::cap("unit tail term", n, cap));
    }
    let (greedy, _) = greedy_under_from(&Rational::unit(t)?, n, &BigInt::from(0))?;
    let mut product = BigInt::one();
    let mut prev: Option<BigInt> = None;
    for (k, w) in greedy.iter().enumerate() {
        let by_product = BigInt::one() + t * &product;
        if *w != by_product {
            return Err(Error::verification(format!(
                "term {} of the tail of 1/{t} is {w}, product form gives {by_product}",
                k + 1
            )));
        }
        if let Some(p) = &prev {
            let by_recurrence = p * p - p + 1u32;
            if *w != by_recurrence {
                return Err(Error::verification(format!(
                    "term {} of the tail of 1/{t} is {w}, recurrence gives {by_recurrence}",
                    k + 1
                )));
            }
        }
        product *= w;
        prev = Some(w.clone());
    }
    Ok(greedy)
}

/// `sum_{i<=k} 1/s_i + 1/(s_{k+1} - 1)` for the orbit of `seed`; checked to
/// equal `1/(seed - 1)`.
pub fn sylvester_partial_identity(seed: &Rational, k: usize, cap: usize) -> Result<Rational> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    let terms = sylvester_terms(seed, k + 1, cap.max(k + 1))?;
    let head = Rational::reciprocal_sum(&terms[..k])?;
    let value = &head + (&terms[k] - Rational::one()).recip()?;
    let expected = (seed - Rational::one()).recip()?;
    if value != expected {
        return Err(Error::verification(format!(
            "telescoping sum for seed {seed} at k = {k} is {value}, expected {expected}"
        )));
    }
    Ok(value)
}

//! Plain enumeration used to cross-check the branch and bound.

use num_bigint::BigInt;

use super::{check_lambda, BestUnderResult};
use crate::egyptian::{greedy_under, UnitSeq};
use crate::error::{Error, Result};
use crate::numeric::Rational;

/// Largest `n` the oracle accepts.
pub const ORACLE_MAX_N: usize = 4;

struct Enumeration<'a> {
    lambda: &'a Rational,
    greedy_sum: Rational,
    hard_cap: u64,
    best: Option<Rational>,
    ties: Vec<Vec<u64>>,
    nodes: u64,
}

impl Enumeration<'_> {
    fn walk(&mut self, prefix: &mut Vec<u64>, partial: &Rational, k: usize) -> Result<()> {
        self.nodes += 1;
        if k == 0 {
            if partial < self.lambda {
                match &self.best {
                    Some(b) if partial < b => {}
                    Some(b) if partial == b => self.ties.push(prefix.clone()),
                    _ => {
                        self.best = Some(partial.clone());
                        self.ties = vec![prefix.clone()];
                    }
                }
            }
            return Ok(());
        }
        // only tuples reaching the greedy sum matter: partial + k/x >= G
        let gap = &self.greedy_sum - partial;
        if !gap.is_positive() {
            return Err(Error::cap("oracle denominator", u64::MAX, self.hard_cap));
        }
        let hi = (Rational::from(k as i64) / gap).floor();
        if hi > BigInt::from(self.hard_cap) {
            return Err(Error::cap("oracle denominator", hi, self.hard_cap));
        }
        let hi: u64 = hi.try_into().expect("bounded by the hard cap");
        let lo = prefix.last().copied().unwrap_or(1);
        for x in lo..=hi {
            let next = partial + Rational::new(1, x)?;
            if next >= *self.lambda {
                continue;
            }
            prefix.push(x);
            self.walk(prefix, &next, k - 1)?;
            prefix.pop();
        }
        Ok(())
    }
}

/// Every non-decreasing `n`-tuple whose sum can reach the greedy sum, with
/// denominators bounded through `x <= k / (G - partial)` for the greedy sum
/// `G` only. Fails if that bound exceeds `hard_cap`.
pub fn naive_best_under_oracle(
    lambda: &Rational,
    n: usize,
    hard_cap: u64,
) -> Result<BestUnderResult> {
    check_lambda(lambda, n)?;
    if n > ORACLE_MAX_N {
        return Err(Error::cap("oracle terms", n, ORACLE_MAX_N));
    }
    let greedy_sum = greedy_under(lambda, n, n)?.sum();
    let mut e = Enumeration {
        lambda,
        greedy_sum,
        hard_cap,
        best: None,
        ties: Vec::new(),
        nodes: 0,
    };
    e.walk(&mut Vec::new(), &Rational::zero(), n)?;
    let best = e
        .best
        .ok_or_else(|| Error::verification("oracle found no tuple reaching the greedy sum"))?;
    let ties = e
        .ties
        .iter()
        .map(|t| UnitSeq::from_u64s(t))
        .collect::<Result<Vec<_>>>()?;
    Ok(BestUnderResult {
        n,
        lambda: lambda.clone(),
        optimum_sum: best,
        canonical_witness: ties[0].clone(),
        ties,
        ties_truncated: false,
        nodes_explored: e.nodes,
        complete: true,
    })
}

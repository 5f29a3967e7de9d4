//! Best `n`-term Egyptian underapproximation: exact branch and bound, a
//! naive enumeration oracle, tie detection, the eventual-greediness probe,
//! and the two divisibility conditions on `p/q`.

mod cache;
mod oracle;
mod probe;
mod search;

use std::sync::atomic::AtomicU64;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use cache::{CacheRecord, ResultCache};
pub use oracle::naive_best_under_oracle;
pub use probe::{
    eventually_greedy_probe, eventually_greedy_probe_cached, GreedyProbeReport, ProbeRow,
    PROBE_MAX_N,
};

use crate::egyptian::{greedy_under, UnitSeq};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numeric::Rational;
use crate::DEFAULT_NODE_CAP;
use search::{first_level, Partial, Searcher};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub node_cap: u64,
    pub tie_cap: usize,
    pub collect_ties: bool,
    pub execution: Execution,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_cap: DEFAULT_NODE_CAP,
            tie_cap: 64,
            collect_ties: false,
            execution: Execution::default(),
        }
    }
}

impl SearchConfig {
    pub fn with_ties(mut self) -> Self {
        self.collect_ties = true;
        self
    }

    pub fn sequential(mut self) -> Self {
        self.execution = Execution::Sequential;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.node_cap == 0 || self.tie_cap == 0 {
            return Err(Error::invalid("search caps must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BestUnderResult {
    pub n: usize,
    pub lambda: Rational,
    pub optimum_sum: Rational,
    pub canonical_witness: UnitSeq,
    /// All optimal tuples when ties were collected, otherwise empty.
    pub ties: Vec<UnitSeq>,
    pub ties_truncated: bool,
    pub nodes_explored: u64,
    pub complete: bool,
}

impl BestUnderResult {
    /// The result, or [`Error::Incomplete`] if the node budget ran out.
    pub fn require_complete(self, node_cap: u64) -> Result<Self> {
        if self.complete {
            Ok(self)
        } else {
            Err(Error::Incomplete { cap: node_cap })
        }
    }
}

fn check_lambda(lambda: &Rational, n: usize) -> Result<()> {
    if !lambda.is_positive() || *lambda > 1 {
        return Err(Error::invalid(format!(
            "target must lie in (0, 1], got {lambda}"
        )));
    }
    if n == 0 {
        return Err(Error::invalid("number of terms must be positive"));
    }
    Ok(())
}

fn merge(parts: Vec<Partial>, tie_cap: usize) -> Partial {
    let mut out = Partial {
        complete: true,
        ..Partial::default()
    };
    for p in parts {
        out.nodes += p.nodes;
        out.complete &= p.complete;
        let Some((sum, witness)) = p.best else {
            continue;
        };
        match &out.best {
            Some((best, _)) if sum < *best => continue,
            Some((best, _)) if sum == *best => {
                out.ties.extend(p.ties);
                out.ties_truncated |= p.ties_truncated;
            }
            _ => {
                out.best = Some((sum, witness));
                out.ties = p.ties;
                out.ties_truncated = p.ties_truncated;
            }
        }
    }
    if out.ties.len() > tie_cap {
        out.ties.truncate(tie_cap);
        out.ties_truncated = true;
    }
    out
}

/// Exact maximum of `sum 1/x_i < lambda` over non-decreasing positive
/// integer `n`-tuples, with the lexicographically smallest optimal tuple.
///
/// The search is seeded with the greedy underapproximation. A subtree with
/// partial sum `s` and `k` terms left, all at least `x`, is cut when
/// `s + k/x` cannot beat the incumbent. An exhausted node budget gives a
/// result with `complete == false`.
pub fn best_under(lambda: &Rational, n: usize, cfg: &SearchConfig) -> Result<BestUnderResult> {
    check_lambda(lambda, n)?;
    cfg.validate()?;
    let greedy = greedy_under(lambda, n, n)?;
    let g = greedy.sum();
    let budget = AtomicU64::new(0);
    let searcher = |prefix: Vec<BigInt>| {
        Searcher::new(
            lambda,
            g.clone(),
            cfg.collect_ties,
            cfg.tie_cap,
            cfg.node_cap,
            &budget,
        )
        .run(&prefix, n - prefix.len())
    };
    let found = if cfg.execution.is_parallel() {
        let firsts = first_level(lambda, n, &g, cfg.collect_ties);
        let parts = cfg
            .execution
            .map(firsts.into_iter().map(|x| vec![x]).collect(), searcher);
        merge(parts, cfg.tie_cap)
    } else {
        merge(vec![searcher(Vec::new())], cfg.tie_cap)
    };
    let (optimum_sum, witness) = match found.best {
        Some((s, w)) => (s, UnitSeq::new(w)?),
        None => (g, greedy),
    };
    let ties = found
        .ties
        .into_iter()
        .map(UnitSeq::new)
        .collect::<Result<Vec<_>>>()?;
    Ok(BestUnderResult {
        n,
        lambda: lambda.clone(),
        optimum_sum,
        canonical_witness: witness,
        ties,
        ties_truncated: found.ties_truncated,
        nodes_explored: found.nodes,
        complete: found.complete,
    })
}

/// [`best_under`] through `cache`. A record without ties does not answer a
/// request for them; complete fresh results are appended.
pub fn best_under_cached(
    lambda: &Rational,
    n: usize,
    cfg: &SearchConfig,
    cache: &ResultCache,
) -> Result<BestUnderResult> {
    if let Some(rec) = cache.get(lambda, n) {
        if !cfg.collect_ties || !rec.ties.is_empty() {
            let mut r = rec.to_result();
            if !cfg.collect_ties {
                r.ties.clear();
                r.ties_truncated = false;
            }
            return Ok(r);
        }
    }
    let r = best_under(lambda, n, cfg)?;
    cache.insert(&r)?;
    Ok(r)
}

/// Whether exactly one tuple is optimal, with the full tie set.
pub fn is_best_unique(
    lambda: &Rational,
    n: usize,
    cfg: &SearchConfig,
) -> Result<(bool, BestUnderResult)> {
    let cfg = cfg.with_ties();
    let r = best_under(lambda, n, &cfg)?.require_complete(cfg.node_cap)?;
    if r.ties_truncated {
        return Err(Error::cap("tie", r.ties.len() + 1, cfg.tie_cap));
    }
    Ok((r.ties.len() == 1, r))
}

fn check_reduced(p: &BigInt, q: &BigInt) -> Result<()> {
    if !p.is_positive() || p > q {
        return Err(Error::invalid(format!("need 0 < p/q <= 1, got {p}/{q}")));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::invalid(format!("{p}/{q} is not in lowest terms")));
    }
    Ok(())
}

/// `p` divides `q + 1`.
pub fn nathanson_condition(p: &BigInt, q: &BigInt) -> Result<bool> {
    check_reduced(p, q)?;
    Ok(((q + 1u32) % p).is_zero())
}

/// `q` is odd and `l = 2` is the least positive `l` with `p | q + l`.
pub fn chu_condition(p: &BigInt, q: &BigInt) -> Result<bool> {
    check_reduced(p, q)?;
    Ok(q.is_odd() && !((q + 1u32) % p).is_zero() && ((q + 2u32) % p).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::q;

    fn ints(xs: &[u64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ten_over_sixty_one() {
        for cfg in [
            SearchConfig::default(),
            SearchConfig::default().sequential(),
        ] {
            let r = best_under(&q("10/61"), 2, &cfg).unwrap();
            assert!(r.complete);
            assert_eq!(r.canonical_witness.denominators(), ints(&[9, 19]));
            assert_eq!(r.optimum_sum, q("28/171"));
            assert!(r.optimum_sum > q("55/336"));
        }
    }

    #[test]
    fn greedy_is_best_for_one() {
        let expected: [&[u64]; 4] = [&[2], &[2, 3], &[2, 3, 7], &[2, 3, 7, 43]];
        for (n, e) in expected.iter().enumerate() {
            let r = best_under(&q("1"), n + 1, &SearchConfig::default()).unwrap();
            assert_eq!(r.canonical_witness.denominators(), ints(e));
        }
        let r = best_under(&q("1/2"), 1, &SearchConfig::default()).unwrap();
        assert_eq!(
            (r.canonical_witness.denominators(), r.optimum_sum),
            (ints(&[3]).as_slice(), q("1/3"))
        );
    }

    #[test]
    fn uniqueness() {
        let (u, r) = is_best_unique(&q("1"), 2, &SearchConfig::default()).unwrap();
        assert!(u);
        assert_eq!(r.ties.len(), 1);
        assert!(
            is_best_unique(&q("1/2"), 1, &SearchConfig::default())
                .unwrap()
                .0
        );
        assert!(
            is_best_unique(&q("10/61"), 2, &SearchConfig::default())
                .unwrap()
                .0
        );
    }

    #[test]
    fn ties_are_found() {
        let cfg = SearchConfig::default();
        let (unique, r) = is_best_unique(&q("12/13"), 3, &cfg).unwrap();
        assert!(!unique);
        let tuples: Vec<String> = r.ties.iter().map(|t| t.to_string()).collect();
        assert_eq!(tuples, ["[2, 3, 12]", "[2, 4, 6]", "[3, 3, 4]"]);
        assert_eq!(r.optimum_sum, q("11/12"));
        let seq = is_best_unique(&q("12/13"), 3, &cfg.sequential()).unwrap().1;
        assert_eq!(seq.ties, r.ties);
        let (unique, r) = is_best_unique(&q("7/10"), 2, &cfg).unwrap();
        assert!(!unique);
        assert_eq!(r.canonical_witness.denominators(), ints(&[2, 6]));
        let capped = SearchConfig { tie_cap: 2, ..cfg };
        assert!(matches!(
            is_best_unique(&q("12/13"), 3, &capped),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn node_cap_flags_incomplete() {
        let cfg = SearchConfig {
            node_cap: 3,
            ..SearchConfig::default()
        };
        let r = best_under(&q("10/61"), 3, &cfg).unwrap();
        assert!(!r.complete);
        assert!(matches!(
            r.require_complete(3),
            Err(Error::Incomplete { cap: 3 })
        ));
    }

    #[test]
    fn conditions() {
        let b = |v: u64| BigInt::from(v);
        assert!(nathanson_condition(&b(2), &b(9)).unwrap());
        assert!(chu_condition(&b(3), &b(7)).unwrap());
        assert!(!nathanson_condition(&b(3), &b(7)).unwrap());
        assert!(nathanson_condition(&b(1), &b(12345)).unwrap());
        assert!(!chu_condition(&b(1), &b(7)).unwrap());
        assert!(nathanson_condition(&b(2), &b(4)).is_err());
        assert!(chu_condition(&b(5), &b(3)).is_err());
    }
}

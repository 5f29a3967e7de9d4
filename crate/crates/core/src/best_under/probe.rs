//! Finite evidence on whether optimal underapproximations are eventually
//! built greedily.

use serde::Serialize;

use super::{best_under, best_under_cached, BestUnderResult, ResultCache, SearchConfig};
use crate::egyptian::UnitSeq;
use crate::error::{Error, Result};
use crate::numeric::Rational;

/// Deepest `n` the probe will search.
pub const PROBE_MAX_N: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeRow {
    pub n: usize,
    pub r_n: Rational,
    pub witness: UnitSeq,
    /// The witness is the previous witness plus one greedy step.
    pub greedy_extension: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyProbeReport {
    pub theta: Rational,
    pub n_max: usize,
    pub per_n: Vec<ProbeRow>,
    /// Least `n0` with every row past `n0` a greedy extension. `None` when
    /// the last row is not one, since nothing after it was observed.
    pub candidate_n0: Option<usize>,
}

fn extends_greedily(theta: &Rational, prev: &UnitSeq, next: &UnitSeq) -> Result<bool> {
    if next.len() != prev.len() + 1 || next.denominators()[..prev.len()] != *prev.denominators() {
        return Ok(false);
    }
    let r = theta - &prev.sum();
    let mut x = r.recip()?.floor() + 1u32;
    if let Some(last) = prev.last() {
        x = x.max(last.clone());
    }
    Ok(next.last() == Some(&x))
}

/// `R_n(theta)` for `n = 1..=n_max` through [`best_under`], and whether each
/// witness extends the one before it by the greedy step. Reports only what
/// was observed up to `n_max`.
pub fn eventually_greedy_probe(
    theta: &Rational,
    n_max: usize,
    cfg: &SearchConfig,
) -> Result<GreedyProbeReport> {
    probe_with(theta, n_max, cfg, |n| best_under(theta, n, cfg))
}

/// [`eventually_greedy_probe`], reading and extending `cache`.
pub fn eventually_greedy_probe_cached(
    theta: &Rational,
    n_max: usize,
    cfg: &SearchConfig,
    cache: &ResultCache,
) -> Result<GreedyProbeReport> {
    probe_with(theta, n_max, cfg, |n| {
        best_under_cached(theta, n, cfg, cache)
    })
}

fn probe_with(
    theta: &Rational,
    n_max: usize,
    cfg: &SearchConfig,
    mut solve: impl FnMut(usize) -> Result<BestUnderResult>,
) -> Result<GreedyProbeReport> {
    if n_max == 0 {
        return Err(Error::invalid("probe depth must be positive"));
    }
    if n_max > PROBE_MAX_N {
        return Err(Error::cap("probe depth", n_max, PROBE_MAX_N));
    }
    let mut per_n: Vec<ProbeRow> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let BestUnderResult {
            optimum_sum,
            canonical_witness,
            ..
        } = solve(n)?.require_complete(cfg.node_cap)?;
        let greedy_extension = match per_n.last() {
            None => true,
            Some(prev) => extends_greedily(theta, &prev.witness, &canonical_witness)?,
        };
        per_n.push(ProbeRow {
            n,
            r_n: optimum_sum,
            witness: canonical_witness,
            greedy_extension,
        });
    }
    let candidate_n0 = match per_n.iter().rposition(|r| !r.greedy_extension) {
        None => Some(0),
        Some(i) if i + 1 == per_n.len() => None,
        Some(i) => Some(per_n[i].n),
    };
    Ok(GreedyProbeReport {
        theta: theta.clone(),
        n_max,
        per_n,
        candidate_n0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::q;

    #[test]
    fn probe_one_is_greedy() {
        let r = eventually_greedy_probe(&q("1"), 4, &SearchConfig::default()).unwrap();
        assert_eq!(r.per_n.len(), 4);
        assert!(r.per_n.iter().all(|row| row.greedy_extension));
        assert_eq!(r.candidate_n0, Some(0));
        assert_eq!(r.per_n[3].witness.to_string(), "[2, 3, 7, 43]");
    }

    #[test]
    fn probe_ten_over_sixty_one() {
        let r = eventually_greedy_probe(&q("10/61"), 3, &SearchConfig::default()).unwrap();
        let flags: Vec<bool> = r.per_n.iter().map(|row| row.greedy_extension).collect();
        assert_eq!(flags, [true, false, true]);
        assert_eq!(r.per_n[2].witness.to_string(), "[9, 19, 5216]");
        assert_eq!(r.candidate_n0, Some(2));
    }

    #[test]
    fn probe_first_row_and_caps() {
        let r = eventually_greedy_probe(&q("19/20"), 3, &SearchConfig::default()).unwrap();
        assert_eq!(r.per_n[0].r_n, q("1/2"));
        assert!(eventually_greedy_probe(&q("1"), 7, &SearchConfig::default()).is_err());
        let tiny = SearchConfig {
            node_cap: 2,
            ..SearchConfig::default()
        };
        assert!(matches!(
            eventually_greedy_probe(&q("10/61"), 3, &tiny),
            Err(Error::Incomplete { .. })
        ));
    }
}

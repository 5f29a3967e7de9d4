//! Depth-first branch and bound over non-decreasing denominator tuples.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::numeric::Rational;

/// Outcome of searching one set of subtrees.
#[derive(Clone, Debug, Default)]
pub(crate) struct Partial {
    /// Best sum strictly above the starting threshold (or equal to it in
    /// tie mode), with its lexicographically first witness.
    pub best: Option<(Rational, Vec<BigInt>)>,
    /// Every witness attaining `best`, in discovery (lexicographic) order.
    pub ties: Vec<Vec<BigInt>>,
    pub ties_truncated: bool,
    pub nodes: u64,
    pub complete: bool,
}

pub(crate) struct Searcher<'a> {
    lambda: &'a Rational,
    collect_ties: bool,
    tie_cap: usize,
    node_cap: u64,
    /// Nodes charged against the cap, shared by all workers.
    budget: &'a AtomicU64,
    best_sum: Rational,
    best: Option<Vec<BigInt>>,
    ties: Vec<Vec<BigInt>>,
    ties_truncated: bool,
    nodes: u64,
    aborted: bool,
}

/// Smallest denominator whose reciprocal fits strictly below `r`, and not
/// below `prev`.
pub(crate) fn first_candidate(r: &Rational, prev: &BigInt) -> BigInt {
    let x = r.recip().expect("positive remainder").floor() + 1u32;
    if &x < prev {
        prev.clone()
    } else {
        x
    }
}

impl<'a> Searcher<'a> {
    pub fn new(
        lambda: &'a Rational,
        threshold: Rational,
        collect_ties: bool,
        tie_cap: usize,
        node_cap: u64,
        budget: &'a AtomicU64,
    ) -> Self {
        Searcher {
            lambda,
            collect_ties,
            tie_cap,
            node_cap,
            budget,
            best_sum: threshold,
            best: None,
            ties: Vec::new(),
            ties_truncated: false,
            nodes: 0,
            aborted: false,
        }
    }

    /// Search every completion of `prefix` with `k` more terms.
    pub fn run(mut self, prefix: &[BigInt], k: usize) -> Partial {
        let partial: Rational = prefix
            .iter()
            .map(|x| Rational::unit(x).expect("positive"))
            .sum();
        let prev = prefix.last().cloned().unwrap_or_else(BigInt::one);
        let mut path = prefix.to_vec();
        if k == 0 {
            self.leaf(&partial, &path);
        } else {
            self.dfs(k, &partial, &prev, &mut path);
        }
        Partial {
            best: self.best.map(|w| (self.best_sum, w)),
            ties: self.ties,
            ties_truncated: self.ties_truncated,
            nodes: self.nodes,
            complete: !self.aborted,
        }
    }

    fn charge(&mut self) -> bool {
        self.nodes += 1;
        if self.budget.fetch_add(1, Ordering::Relaxed) >= self.node_cap {
            self.aborted = true;
        }
        !self.aborted
    }

    fn leaf(&mut self, sum: &Rational, path: &[BigInt]) {
        if sum >= self.lambda {
            return;
        }
        if *sum > self.best_sum
            || (self.best.is_none() && self.collect_ties && *sum == self.best_sum)
        {
            self.best_sum = sum.clone();
            self.best = Some(path.to_vec());
            self.ties.clear();
            self.ties_truncated = false;
            if self.collect_ties {
                self.ties.push(path.to_vec());
            }
        } else if self.collect_ties && *sum == self.best_sum {
            if self.ties.len() < self.tie_cap {
                self.ties.push(path.to_vec());
            } else {
                self.ties_truncated = true;
            }
        }
    }

    fn dfs(&mut self, k: usize, partial: &Rational, prev: &BigInt, path: &mut Vec<BigInt>) {
        if !self.charge() {
            return;
        }
        let r = self.lambda - partial;
        let mut x = first_candidate(&r, prev);
        if k == 1 {
            // 1/x decreases in x, so the first feasible denominator is best
            let sum = partial + Rational::unit(&x).expect("positive");
            path.push(x);
            self.leaf(&sum, path);
            path.pop();
            return;
        }
        let kk = Rational::from(k as i64);
        loop {
            // every later term is at least x, so k/x bounds the completion
            let bound = partial + &kk / Rational::from(x.clone());
            let cut = if self.collect_ties {
                bound < self.best_sum
            } else {
                bound <= self.best_sum
            };
            if cut || self.aborted {
                break;
            }
            let next = partial + Rational::unit(&x).expect("positive");
            path.push(x.clone());
            self.dfs(k - 1, &next, &x, path);
            path.pop();
            x += 1u32;
        }
    }
}

/// Candidate first denominators whose subtree can still reach `threshold`.
pub(crate) fn first_level(
    lambda: &Rational,
    n: usize,
    threshold: &Rational,
    inclusive: bool,
) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut x = first_candidate(lambda, &BigInt::zero());
    let nn = Rational::from(n as i64);
    loop {
        let bound = &nn / Rational::from(x.clone());
        let keep = if inclusive {
            bound >= *threshold
        } else {
            bound > *threshold
        };
        if !keep {
            break;
        }
        out.push(x.clone());
        x += 1u32;
    }
    out
}

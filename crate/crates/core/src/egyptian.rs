//! Greedy unit-fraction algorithms, the finite-prefix-plus-tail sequence
//! representation, and the product-sum comparison as a checkable predicate.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Rational;

/// Finite non-decreasing sequence of positive integer denominators with its
/// exact partial sums.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UnitSeq {
    denominators: Vec<BigInt>,
    partial_sums: Vec<Rational>,
}

impl UnitSeq {
    pub fn new(denominators: Vec<BigInt>) -> Result<Self> {
        let mut seq = UnitSeq::default();
        for d in denominators {
            seq.push(d)?;
        }
        Ok(seq)
    }

    pub fn from_u64s(values: &[u64]) -> Result<Self> {
        UnitSeq::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn push(&mut self, d: BigInt) -> Result<()> {
        if !d.is_positive() {
            return Err(Error::invalid(format!(
                "denominator must be positive, got {d}"
            )));
        }
        if let Some(last) = self.denominators.last() {
            if &d < last {
                return Err(Error::invalid(format!(
                    "denominators must be non-decreasing, got {d} after {last}"
                )));
            }
        }
        let sum = self.sum() + Rational::unit(&d)?;
        self.denominators.push(d);
        self.partial_sums.push(sum);
        Ok(())
    }

    pub fn denominators(&self) -> &[BigInt] {
        &self.denominators
    }

    pub fn into_denominators(self) -> Vec<BigInt> {
        self.denominators
    }

    pub fn partial_sums(&self) -> &[Rational] {
        &self.partial_sums
    }

    /// Sum of the first `k` reciprocals.
    pub fn partial_sum(&self, k: usize) -> Rational {
        match k {
            0 => Rational::zero(),
            k => self.partial_sums[k.min(self.len()) - 1].clone(),
        }
    }

    pub fn sum(&self) -> Rational {
        self.partial_sums
            .last()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.denominators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.denominators.is_empty()
    }

    pub fn last(&self) -> Option<&BigInt> {
        self.denominators.last()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.denominators.windows(2).all(|w| w[0] < w[1])
    }

    pub fn as_rationals(&self) -> Vec<Rational> {
        self.denominators.iter().map(Rational::from).collect()
    }
}

impl fmt::Display for UnitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, d) in self.denominators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for UnitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitSeq{self}")
    }
}

impl Serialize for UnitSeq {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.denominators.iter().map(|d| d.to_string()))
    }
}

impl<'de> Deserialize<'de> for UnitSeq {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        let denoms = raw
            .iter()
            .map(|s| {
                let r: Rational = s.parse().map_err(serde::de::Error::custom)?;
                r.to_integer()
                    .ok_or_else(|| serde::de::Error::custom(format!("not an integer: {s}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        UnitSeq::new(denoms).map_err(serde::de::Error::custom)
    }
}

/// How an infinite sequence continues after its explicit prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tail {
    /// The sequence is just the prefix.
    None,
    /// `c_{n+1} = c_n^2 - c_n + 1` for every `n >= from` (1-based).
    Sylvester { from: usize },
    /// After the prefix, the infinite greedy underapproximation of `target`.
    GreedyUnder { target: Rational },
}

#[derive(Serialize, Deserialize)]
struct SeqSpecRepr {
    prefix: Vec<Rational>,
    tail: Tail,
    target: Rational,
}

/// A finite exact prefix followed by a regular tail rule. `target` is the
/// total reciprocal sum of the whole (possibly infinite) sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeqSpecRepr", into = "SeqSpecRepr")]
pub struct SeqSpec {
    prefix: Vec<Rational>,
    tail: Tail,
    target: Rational,
}

impl TryFrom<SeqSpecRepr> for SeqSpec {
    type Error = Error;

    fn try_from(r: SeqSpecRepr) -> Result<Self> {
        SeqSpec::new(r.prefix, r.tail, r.target)
    }
}

impl From<SeqSpec> for SeqSpecRepr {
    fn from(s: SeqSpec) -> Self {
        SeqSpecRepr {
            prefix: s.prefix,
            tail: s.tail,
            target: s.target,
        }
    }
}

impl SeqSpec {
    pub fn new(prefix: Vec<Rational>, tail: Tail, target: Rational) -> Result<Self> {
        for (i, t) in prefix.iter().enumerate() {
            if *t < 1 {
                return Err(Error::invalid(format!(
                    "term {} must be at least 1, got {t}",
                    i + 1
                )));
            }
            if i > 0 && *t < prefix[i - 1] {
                return Err(Error::invalid(format!(
                    "prefix must be non-decreasing at term {}",
                    i + 1
                )));
            }
        }
        let prefix_sum = Rational::reciprocal_sum(&prefix)?;
        match &tail {
            Tail::None => {
                if prefix_sum != target {
                    return Err(Error::invalid(format!(
                        "finite sequence sums to {prefix_sum}, not the declared target {target}"
                    )));
                }
            }
            Tail::Sylvester { from } => {
                let n = *from;
                if n == 0 || n > prefix.len() {
                    return Err(Error::invalid(format!(
                        "sylvester tail start {n} must lie within the prefix of length {}",
                        prefix.len()
                    )));
                }
                if prefix[n - 1] < 2 {
                    return Err(Error::invalid(
                        "sylvester tail must start at a term of at least 2",
                    ));
                }
                for k in n..prefix.len() {
                    if prefix[k] != prefix[k - 1].sylvester_step() {
                        return Err(Error::invalid(format!(
                            "term {} breaks the recurrence declared from {n}",
                            k + 1
                        )));
                    }
                }
                // sum_{i >= n} 1/c_i telescopes to 1/(c_n - 1)
                let head = Rational::reciprocal_sum(&prefix[..n - 1])?;
                let total = head + (&prefix[n - 1] - Rational::one()).recip()?;
                if total != target {
                    return Err(Error::invalid(format!(
                        "sequence sums to {total}, not the declared target {target}"
                    )));
                }
            }
            Tail::GreedyUnder { target: t } => {
                if !t.is_positive() || *t > 1 {
                    return Err(Error::invalid(format!(
                        "greedy tail target must lie in (0, 1], got {t}"
                    )));
                }
                if &target - &prefix_sum != *t {
                    return Err(Error::invalid(format!(
                        "greedy tail target {t} is not the declared target minus the prefix sum"
                    )));
                }
                let first = Rational::from(greedy_under_step(t, &BigInt::zero())?);
                if let Some(last) = prefix.last() {
                    if first < *last {
                        return Err(Error::invalid(
                            "greedy tail would start below the end of the prefix",
                        ));
                    }
                }
            }
        }
        Ok(SeqSpec {
            prefix,
            tail,
            target,
        })
    }

    /// A finite sequence; the target is its reciprocal sum.
    pub fn finite(prefix: Vec<Rational>) -> Result<Self> {
        let target = Rational::reciprocal_sum(&prefix)?;
        SeqSpec::new(prefix, Tail::None, target)
    }

    /// Prefix followed by the greedy underapproximation of what remains of
    /// `target`.
    pub fn with_greedy_tail(prefix: Vec<Rational>, target: Rational) -> Result<Self> {
        let t = &target - Rational::reciprocal_sum(&prefix)?;
        SeqSpec::new(prefix, Tail::GreedyUnder { target: t }, target)
    }

    /// Prefix whose last term starts a Sylvester recurrence.
    pub fn with_sylvester_tail(prefix: Vec<Rational>) -> Result<Self> {
        let n = prefix.len();
        if n == 0 {
            return Err(Error::invalid("sylvester tail needs a nonempty prefix"));
        }
        let head = Rational::reciprocal_sum(&prefix[..n - 1])?;
        let target = head + (&prefix[n - 1] - Rational::one()).recip()?;
        SeqSpec::new(prefix, Tail::Sylvester { from: n }, target)
    }

    /// Sylvester's sequence `2, 3, 7, 43, ...`.
    pub fn sylvester() -> Self {
        SeqSpec::with_sylvester_tail(vec![Rational::from(2)]).expect("valid")
    }

    /// The infinite greedy underapproximation of `lambda`.
    pub fn greedy_under(lambda: &Rational) -> Result<Self> {
        SeqSpec::with_greedy_tail(Vec::new(), lambda.clone())
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn target(&self) -> &Rational {
        &self.target
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.tail, Tail::None)
    }

    /// First `n` terms (or fewer for a finite sequence shorter than `n`).
    pub fn terms(&self, n: usize, cap: usize) -> Result<Vec<Rational>> {
        if n > cap.max(self.prefix.len()) {
            return Err(Error::cap("sequence term", n, cap.max(self.prefix.len())));
        }
        let mut out: Vec<Rational> = self.prefix.iter().take(n).cloned().collect();
        if out.len() == n {
            return Ok(out);
        }
        match &self.tail {
            Tail::None => {}
            Tail::Sylvester { .. } => {
                while out.len() < n {
                    let next = out.last().expect("nonempty prefix").sylvester_step();
                    out.push(next);
                }
            }
            Tail::GreedyUnder { target } => {
                let (xs, _) = greedy_under_from(target, n - out.len(), &BigInt::zero())?;
                out.extend(xs.iter().map(Rational::from));
            }
        }
        Ok(out)
    }

    /// The first `n` terms must exist.
    pub fn terms_exact(&self, n: usize, cap: usize) -> Result<Vec<Rational>> {
        let out = self.terms(n, cap)?;
        if out.len() < n {
            return Err(Error::domain(format!(
                "finite sequence has only {} terms",
                out.len()
            )));
        }
        Ok(out)
    }

    /// Sum of the first `k` reciprocals.
    pub fn partial_sum(&self, k: usize, cap: usize) -> Result<Rational> {
        Rational::reciprocal_sum(&self.terms_exact(k, cap)?)
    }

    /// The integer terms as a [`UnitSeq`], if all of the first `n` are
    /// integral.
    pub fn unit_terms(&self, n: usize, cap: usize) -> Result<UnitSeq> {
        let terms = self.terms_exact(n, cap)?;
        let ints = terms
            .iter()
            .map(|t| {
                t.to_integer()
                    .ok_or_else(|| Error::invalid(format!("term {t} is not an integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        UnitSeq::new(ints)
    }
}

/// The greedy underapproximation choice `floor(1/r) + 1`, checked to exceed
/// `previous`.
pub fn greedy_under_step(remainder: &Rational, previous: &BigInt) -> Result<BigInt> {
    if !remainder.is_positive() {
        return Err(Error::invalid(format!(
            "remainder must be positive, got {remainder}"
        )));
    }
    let x = remainder.recip()?.floor() + 1u32;
    if &x <= previous {
        return Err(Error::verification(format!(
            "greedy step chose {x}, not above the previous denominator {previous}"
        )));
    }
    Ok(x)
}

/// `n` greedy underapproximation steps from remainder `r`, returning the
/// denominators and the final remainder.
pub(crate) fn greedy_under_from(
    r: &Rational,
    n: usize,
    previous: &BigInt,
) -> Result<(Vec<BigInt>, Rational)> {
    let mut rem = r.clone();
    let mut prev = previous.clone();
    let mut xs = Vec::with_capacity(n);
    for _ in 0..n {
        let x = greedy_under_step(&rem, &prev)?;
        rem = rem - Rational::unit(&x)?;
        prev = x.clone();
        xs.push(x);
    }
    Ok((xs, rem))
}

fn check_unit_interval(lambda: &Rational) -> Result<()> {
    if !lambda.is_positive() || *lambda > 1 {
        return Err(Error::invalid(format!(
            "target must lie in (0, 1], got {lambda}"
        )));
    }
    Ok(())
}

/// Greedy `n`-term underapproximation of `lambda`.
pub fn greedy_under(lambda: &Rational, n: usize, term_cap: usize) -> Result<UnitSeq> {
    check_unit_interval(lambda)?;
    if n == 0 {
        return Err(Error::invalid("number of terms must be positive"));
    }
    if n > term_cap {
        return Err(Error::cap("greedy term", n, term_cap));
    }
    let (xs, _) = greedy_under_from(lambda, n, &BigInt::zero())?;
    UnitSeq::new(xs)
}

/// One step of the greedy approximation: remainder `a/b`, chosen `t`, and
/// the numerator `ta - b` of the next remainder `(ta - b)/(tb)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyStep {
    pub remainder: Rational,
    pub t: BigInt,
    pub next_numerator: BigInt,
    /// `t` was raised above `ceil(b/a)`, by the floor of 2 or to keep the
    /// denominators distinct.
    pub clamped: bool,
}

/// Greedy approximation with the per-step record.
///
/// Each step takes `t = max(ceil(b/a), 2)`, raised past the previous
/// denominator when needed so the denominators stay distinct (this only
/// happens for `lambda = 1`). On unclamped steps the numerator strictly
/// decreases; that is checked.
pub fn greedy_approx_trace(lambda: &Rational) -> Result<Vec<GreedyStep>> {
    check_unit_interval(lambda)?;
    let mut steps = Vec::new();
    let mut rem = lambda.clone();
    let two = BigInt::from(2);
    let mut prev = BigInt::zero();
    while !rem.is_zero() {
        let (a, b) = (rem.numer().clone(), rem.denom().clone());
        let ceil = b.div_ceil(&a);
        let t = std::cmp::max(std::cmp::max(ceil.clone(), two.clone()), &prev + 1u32);
        let clamped = t != ceil;
        let next_numerator = &t * &a - &b;
        if !clamped && next_numerator >= a {
            return Err(Error::verification(format!(
                "greedy numerator did not decrease at remainder {rem}"
            )));
        }
        let next = &rem - Rational::unit(&t)?;
        if next.is_negative() {
            return Err(Error::verification("greedy step overshot the remainder"));
        }
        steps.push(GreedyStep {
            remainder: rem,
            t: t.clone(),
            next_numerator,
            clamped,
        });
        rem = next;
        prev = t;
    }
    Ok(steps)
}

/// Finite greedy (Fibonacci-Sylvester) Egyptian representation of `lambda`.
pub fn greedy_approx(lambda: &Rational) -> Result<UnitSeq> {
    let seq = UnitSeq::new(
        greedy_approx_trace(lambda)?
            .into_iter()
            .map(|s| s.t)
            .collect(),
    )?;
    if seq.sum() != *lambda {
        return Err(Error::verification(
            "greedy approximation does not sum to the target",
        ));
    }
    Ok(seq)
}

/// Split of the greedy underapproximation into the finite greedy
/// approximation and the greedy tail of a unit fraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyDecomposition {
    pub lambda: Rational,
    pub approx_component: UnitSeq,
    pub tail_unit_fraction: Rational,
    pub split_index: usize,
}

pub fn decompose(lambda: &Rational) -> Result<GreedyDecomposition> {
    let approx = greedy_approx(lambda)?;
    let n = approx.len();
    let last = approx.last().expect("nonempty").clone();
    let under = greedy_under(lambda, n, n)?;
    let mut expected = approx.denominators().to_vec();
    expected[n - 1] += 1u32;
    if under.denominators() != expected.as_slice() {
        return Err(Error::verification(format!(
            "greedy underapproximation {under} does not extend the approximation {approx}"
        )));
    }
    Ok(GreedyDecomposition {
        lambda: lambda.clone(),
        approx_component: approx,
        tail_unit_fraction: Rational::unit(&last)?,
        split_index: n,
    })
}

/// Smallest 1-based index from which the whole sequence obeys
/// `c_{n+1} = c_n^2 - c_n + 1`, if it does from some point on.
pub fn is_eventually_sylvester(spec: &SeqSpec) -> Result<Option<usize>> {
    // index (1-based) from which the tail rule guarantees the recurrence
    let (guaranteed, terms) = match spec.tail() {
        Tail::None => {
            let p = spec.prefix();
            if p.len() < 2 || p[p.len() - 1] != p[p.len() - 2].sylvester_step() {
                return Ok(None);
            }
            (p.len() - 1, p.to_vec())
        }
        Tail::Sylvester { from } => (*from, spec.prefix().to_vec()),
        Tail::GreedyUnder { target } => {
            let split = decompose(target)?.split_index;
            let n = spec.prefix().len() + split;
            (n, spec.terms_exact(n, n)?)
        }
    };
    let mut start = guaranteed;
    while start > 1 && terms[start - 1] == terms[start - 2].sylvester_step() {
        start -= 1;
    }
    Ok(Some(start))
}

/// Sort distinct positive integers ascending.
pub fn increasing_rearrangement(values: &[BigInt]) -> Result<UnitSeq> {
    let mut sorted = values.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid(
            "increasing rearrangement needs distinct elements",
        ));
    }
    UnitSeq::new(sorted)
}

/// `(hypothesis, conclusion)` of the product-sum comparison: the hypothesis
/// is that every prefix product of `a` is at most that of `x`, the
/// conclusion that `sum 1/x <= sum 1/a`.
pub fn product_dominance_implies_sum(x: &UnitSeq, a: &UnitSeq) -> Result<(bool, bool)> {
    if x.len() != a.len() {
        return Err(Error::invalid(format!(
            "sequences differ in length: {} vs {}",
            x.len(),
            a.len()
        )));
    }
    if !x.is_strictly_increasing() || !a.is_strictly_increasing() {
        return Err(Error::invalid("both sequences must be increasing"));
    }
    let mut px = BigInt::one();
    let mut pa = BigInt::one();
    let mut hypothesis = true;
    for (xi, ai) in x.denominators().iter().zip(a.denominators()) {
        px *= xi;
        pa *= ai;
        if pa > px {
            hypothesis = false;
            break;
        }
    }
    Ok((hypothesis, x.sum() <= a.sum()))
}

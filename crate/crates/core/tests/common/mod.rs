#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;
use underapprox::egyptian::UnitSeq;
use underapprox::numeric::rational::q;
use underapprox::{Ball, Rational};

pub fn ints(xs: &[u64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// The grid the optimizer is checked on against the oracle.
pub fn oracle_grid() -> Vec<Rational> {
    ["1", "1/2", "2/3", "10/61", "19/20", "3/7", "4/17", "5/21"]
        .iter()
        .map(|s| q(s))
        .collect()
}

/// An increasing `a` and an increasing `x` whose prefix products dominate
/// those of `a`. Each `x_i` is the least admissible value plus a random
/// slack, so `x_i < a_i` happens once `x` has built up a surplus.
pub fn dominated_pair<R: Rng>(rng: &mut R, len: usize) -> (UnitSeq, UnitSeq) {
    let mut a = Vec::with_capacity(len);
    let mut cur = BigInt::from(rng.random_range(2u64..8));
    for _ in 0..len {
        a.push(cur.clone());
        cur += rng.random_range(1u64..12);
    }
    let mut x: Vec<BigInt> = Vec::with_capacity(len);
    let mut pa = BigInt::from(1);
    let mut px = BigInt::from(1);
    for ai in &a {
        pa *= ai;
        let need = (&pa + &px - 1u32) / &px;
        let floor = x
            .last()
            .map(|v| v + 1u32)
            .unwrap_or_else(|| BigInt::from(1));
        let xi = need.max(floor) + rng.random_range(0u64..4);
        px *= &xi;
        x.push(xi);
    }
    (UnitSeq::new(x).unwrap(), UnitSeq::new(a).unwrap())
}

fn ball_ops(x: &Rational, y: &Rational, bits: u32) -> Vec<(&'static str, Option<Ball>)> {
    let bx = Ball::from_rational(x, bits).unwrap();
    let by = Ball::from_rational(y, bits).unwrap();
    vec![
        ("add", Some(bx.add(&by))),
        ("sub", Some(bx.sub(&by))),
        ("mul", Some(bx.mul(&by))),
        ("div", bx.div(&by).ok()),
        ("recip", bx.recip().ok()),
        ("log", bx.log().ok()),
        ("log1p", bx.log1p().ok()),
        ("exp", bx.exp().ok()),
        ("root4", bx.root_pow2(2).ok()),
        ("exp_log", bx.log().and_then(|l| l.exp()).ok()),
    ]
}

fn exact_op(name: &str, x: &Rational, y: &Rational) -> Option<Rational> {
    match name {
        "add" => Some(x + y),
        "sub" => Some(x - y),
        "mul" => Some(x * y),
        "div" => x.checked_div(y).ok(),
        "recip" => x.recip().ok(),
        "exp_log" => Some(x.clone()),
        _ => None,
    }
}

/// Runs the operation corpus on `x`, `y` at `bits` and `2 bits`. A
/// violation is a doubled result that does not overlap the original, has a
/// larger radius, or misses the exact value when there is one.
pub fn nesting_violations(x: &Rational, y: &Rational, bits: u32) -> Vec<String> {
    let lo = ball_ops(x, y, bits);
    let hi = ball_ops(x, y, 2 * bits);
    let mut out = Vec::new();
    for ((name, a), (_, b)) in lo.into_iter().zip(hi) {
        let (a, b) = match (a, b) {
            (Some(a), Some(b)) => (a, b),
            (None, None) => continue,
            (Some(_), None) => {
                out.push(format!("{name}({x}, {y}): defined at {bits} bits only"));
                continue;
            }
            // a wide ball may straddle a domain boundary the narrow one clears
            (None, Some(_)) => continue,
        };
        if !a.overlaps(&b) {
            out.push(format!("{name}({x}, {y}): {a:?} and {b:?} are disjoint"));
        }
        if b.radius() > a.radius() {
            out.push(format!("{name}({x}, {y}): radius grew from {a:?} to {b:?}"));
        }
        if let Some(v) = exact_op(name, x, y) {
            if !a.contains_rational(&v) || !b.contains_rational(&v) {
                out.push(format!("{name}({x}, {y}): {v} not enclosed"));
            }
        }
    }
    out
}

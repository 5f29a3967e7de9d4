mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use underapprox::best_under::{best_under, SearchConfig};
use underapprox::construct::{build_c, competitor, lemma31_check};
use underapprox::egyptian::{greedy_under, product_dominance_implies_sum, SeqSpec};
use underapprox::exec::Execution;
use underapprox::limits::{direct_estimate, f_eval, h_j_eval, seq_limit, seq_limit_via_f, vardi};
use underapprox::sylvester::unit_tail;
use underapprox::{Ball, Rational};

use common::{dominated_pair, nesting_violations};

fn rational(lo: i64, hi: i64, den: i64) -> impl Strategy<Value = Rational> {
    (lo * den..=hi * den, 1..=den).prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

fn unit_interval() -> impl Strategy<Value = Rational> {
    (1i64..=40)
        .prop_flat_map(|q| (1..=q, Just(q)))
        .prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = Rational::new(p, q).unwrap();
        prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r.clone());
        let json = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), r);
    }

    #[test]
    fn ball_encloses_and_nests(x in rational(-30, 30, 97), y in rational(-30, 30, 89), bits in 40u32..200) {
        let v = nesting_violations(&x, &y, bits);
        prop_assert!(v.is_empty(), "{:?}", v);
    }

    #[test]
    fn ball_from_rational_contains(x in rational(-1000, 1000, 1000), bits in 8u32..300) {
        let b = Ball::from_rational(&x, bits).unwrap();
        prop_assert!(b.contains_rational(&x));
    }

    #[test]
    fn product_dominance_gives_sum(seed in any::<u64>(), len in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, a) = dominated_pair(&mut rng, len);
        prop_assert_eq!(product_dominance_implies_sum(&x, &a).unwrap(), (true, true));
    }

    #[test]
    fn greedy_telescopes(lambda in unit_interval(), n in 1usize..7) {
        let g = greedy_under(&lambda, n, n).unwrap();
        let mut r = lambda.clone();
        for x in g.denominators() {
            let prev = r.clone();
            r = &r - Rational::unit(x).unwrap();
            prop_assert!(r.is_positive());
            // 1/x < prev <= 1/(x - 1)
            prop_assert!(r <= Rational::unit(x).unwrap() * Rational::unit(&(x - 1u32)).unwrap());
            prop_assert!(prev * Rational::from(x.clone()) > 1);
        }
        prop_assert_eq!(&g.sum() + &r, lambda);
        prop_assert!(g.is_strictly_increasing());
    }

    #[test]
    fn unit_tail_matches_greedy(t in 1u64..500, n in 1usize..7) {
        let t = BigInt::from(t);
        let tail = unit_tail(&t, n, 10).unwrap();
        let g = greedy_under(&Rational::unit(&t).unwrap(), n, n).unwrap();
        prop_assert_eq!(tail.as_slice(), g.denominators());
        let last = tail.last().unwrap();
        let rest = Rational::unit(&(last * last - last)).unwrap();
        prop_assert_eq!(g.sum() + rest, Rational::unit(&t).unwrap());
    }

    #[test]
    fn h_j_positive(x in rational(3, 60, 50), j in 1usize..=20) {
        prop_assume!(x >= 3);
        prop_assert!(h_j_eval(j, &x).unwrap().is_positive());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn f_is_increasing(x in rational(3, 40, 20), step in 1i64..40) {
        prop_assume!(x >= 3);
        let y = &x + Rational::new(step, 10).unwrap();
        prop_assert!(f_eval(&x, 20).unwrap().strictly_below(&f_eval(&y, 20).unwrap()));
    }

    #[test]
    fn limit_routes_agree(t in 2u64..60) {
        let spec = SeqSpec::with_sylvester_tail(vec![Rational::from(t as i64)]).unwrap();
        let a = seq_limit(&spec, 20).unwrap().value;
        let b = seq_limit_via_f(&spec, 20).unwrap();
        prop_assert!(a.overlaps(&b));
    }

    #[test]
    fn construction_is_valid(s in 1usize..=6, delta in 1u64..12) {
        let a = competitor(s, delta, 10).unwrap();
        let c = build_c(&a, 10).unwrap();
        prop_assert_eq!(c.divergence_m, s);
        prop_assert_eq!(c.c_spec.target(), &Rational::one());
        let terms = c.c_spec.terms(12, 12).unwrap();
        prop_assert!(terms.windows(2).all(|w| w[0] < w[1]));
        for k in s..=12 {
            prop_assert!(lemma31_check(&a, &c, k, 12).unwrap());
        }
    }

    #[test]
    fn best_under_dominates_greedy(lambda in unit_interval(), n in 1usize..=3) {
        let cfg = SearchConfig::default();
        let r = best_under(&lambda, n, &cfg).unwrap();
        prop_assert!(r.complete);
        prop_assert!(r.optimum_sum < lambda);
        let g = greedy_under(&lambda, n, n).unwrap();
        prop_assert!(r.optimum_sum >= g.sum());
        prop_assert_eq!(r.optimum_sum == g.sum(), r.canonical_witness == g);
        prop_assert_eq!(r.canonical_witness.sum(), r.optimum_sum.clone());
        if n < 3 {
            let next = best_under(&lambda, n + 1, &cfg).unwrap();
            prop_assert!(next.optimum_sum > r.optimum_sum);
        }
    }

    #[test]
    fn execution_modes_agree(lambda in unit_interval(), n in 1usize..=3) {
        let par = SearchConfig::default().with_ties();
        let seq = SearchConfig { execution: Execution::Sequential, ..par };
        let a = best_under(&lambda, n, &par).unwrap();
        let b = best_under(&lambda, n, &seq).unwrap();
        prop_assert_eq!(&a.canonical_witness, &b.canonical_witness);
        prop_assert_eq!(&a.ties, &b.ties);
        prop_assert_eq!(a.optimum_sum, b.optimum_sum);
    }
}

#[test]
fn direct_estimates_close_in_on_vardi() {
    let v = vardi(30).unwrap();
    let spec = SeqSpec::sylvester();
    let mut gaps = Vec::new();
    for n in 1..=7 {
        let d = direct_estimate(&spec, n, 30, 12).unwrap();
        let gap = d.sub(&v);
        assert!(gap.is_positive(), "u_{n}^(2^-{n}) should exceed the limit");
        gaps.push(gap.upper());
    }
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

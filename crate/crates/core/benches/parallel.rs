use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use underapprox::best_under::{best_under, SearchConfig};
use underapprox::construct::{build_c, check_claims, competitor_family};
use underapprox::exec::Execution;
use underapprox::limits::seq_limit;
use underapprox::numeric::rational::q;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("best_under");
    g.sample_size(10);
    for (lambda, n) in [("10/61", 3), ("4/17", 3), ("1", 4)] {
        let lambda = q(lambda);
        for (name, execution) in MODES {
            let cfg = SearchConfig {
                execution,
                ..SearchConfig::default()
            };
            g.bench_with_input(
                BenchmarkId::new(name, format!("{lambda}/{n}")),
                &lambda,
                |b, l| b.iter(|| best_under(l, n, &cfg).unwrap()),
            );
        }
    }
    g.finish();
}

fn claims(c: &mut Criterion) {
    let mut g = c.benchmark_group("claims");
    g.sample_size(10);
    for (name, execution) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| {
                execution.map((1..=10).collect(), |m| {
                    check_claims(m, 10).unwrap().claim2_ok
                })
            })
        });
    }
    g.finish();
}

fn limits(c: &mut Criterion) {
    let mut g = c.benchmark_group("competitor_limits");
    g.sample_size(10);
    let family = competitor_family(8, 10).unwrap();
    for (name, execution) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| {
                execution.map(family.clone(), |a| {
                    let c = build_c(&a, 10).unwrap();
                    seq_limit(&c.c_spec, 20).unwrap().value
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, search, claims, limits);
criterion_main!(benches);

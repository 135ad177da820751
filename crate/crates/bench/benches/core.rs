use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use crookmaps::generators::{base_f, lambda, sigma, LambdaParams};
use crookmaps::verify::{check_measure_preserving, delta_crooked_certificate, delta_crooked_certificate_interval, leo_certificate};
use crookmaps::{q, PLLift, Rational, DEFAULT_VERTEX_BUDGET};
use std::hint::black_box;

fn lam(n: u32, k: u32) -> PLLift {
    lambda(&LambdaParams::new(n, k, Rational::zero()).unwrap()).unwrap()
}

fn compose(c: &mut Criterion) {
    let f = base_f();
    let mut g = c.benchmark_group("compose");
    for (n, k) in [(7, 2), (7, 4), (9, 2)] {
        let l = lam(n, k);
        g.bench_with_input(BenchmarkId::new("base_after_lambda", format!("{n},{k}")), &l, |b, l| {
            b.iter(|| PLLift::compose_with_budget(black_box(&f), black_box(l), DEFAULT_VERTEX_BUDGET).unwrap())
        });
    }
    g.bench_function("base_iterate_3", |b| b.iter(|| black_box(&f).iterate(3, DEFAULT_VERTEX_BUDGET).unwrap()));
    g.finish();
}

fn measure(c: &mut Criterion) {
    let mut g = c.benchmark_group("measure");
    let composed = PLLift::compose(&base_f(), &lam(7, 4)).unwrap();
    for (name, m) in [("lambda_7_4", lam(7, 4)), ("base", base_f()), ("base_after_lambda_7_4", composed)] {
        g.bench_function(name, |b| b.iter(|| check_measure_preserving(black_box(&m)).unwrap()));
    }
    g.finish();
}

fn crookedness(c: &mut Criterion) {
    let mut g = c.benchmark_group("crookedness");
    g.sample_size(10);
    for n in [6, 7] {
        let s = sigma(n).map;
        g.bench_function(format!("sigma_{n}"), |b| b.iter(|| delta_crooked_certificate_interval(black_box(&s), &q(3, n as i64))));
    }
    let l = lam(7, 2);
    g.bench_function("lambda_7_2", |b| b.iter(|| delta_crooked_certificate(black_box(&l), &q(1, 2))));
    g.finish();
}

fn leo(c: &mut Criterion) {
    let f = base_f();
    c.bench_function("leo_base_xi_1_10", |b| b.iter(|| leo_certificate(black_box(&f), &q(1, 10), 64).unwrap()));
}

criterion_group!(benches, compose, measure, crookedness, leo);
criterion_main!(benches);

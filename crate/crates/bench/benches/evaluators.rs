//! Steady-state timings of the hot evaluators: the segmented enumeration,
//! the residue-constant stream, the saddle solver, the polynomial cascade,
//! and the exponential integral.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use medianprime::products::constant_c_at_cutoff;
use medianprime::saddle::solve_rho;
use medianprime::series::{cascade_p, cascade_r};
use medianprime::specfun::ei;
use medianprime::{exact_sum, CountMode};

fn bench_exact_sum(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    group.sample_size(10);
    group.bench_function("exact_sum 1e6 omega", |b| {
        b.iter(|| exact_sum(black_box(1e6), CountMode::Omega).unwrap().total)
    });
    group.finish();
}

fn bench_constant_stream(c: &mut Criterion) {
    let mut group = c.benchmark_group("products");
    group.sample_size(20);
    group.bench_function("constant_c_at_cutoff 1e5", |b| {
        b.iter(|| constant_c_at_cutoff(1, black_box(100_000)).value.re)
    });
    group.finish();
}

fn bench_solve_rho(c: &mut Criterion) {
    // Warm the shared prime table so iterations measure only the solver.
    solve_rho(1e6, 1e-12).unwrap();
    c.bench_function("solve_rho xi=1e6", |b| {
        b.iter(|| solve_rho(black_box(1e6), 1e-12).unwrap().rho)
    });
}

fn bench_cascade(c: &mut Criterion) {
    c.bench_function("cascade depth 6 both families", |b| {
        b.iter(|| (cascade_r(black_box(6)).depth(), cascade_p(black_box(6)).depth()))
    });
}

fn bench_ei(c: &mut Criterion) {
    c.bench_function("ei sweep 1e3 points", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 1..=1000 {
                acc += ei(black_box(i as f64 / 10.0));
            }
            acc
        })
    });
}

criterion_group!(
    benches,
    bench_exact_sum,
    bench_constant_stream,
    bench_solve_rho,
    bench_cascade,
    bench_ei
);
criterion_main!(benches);

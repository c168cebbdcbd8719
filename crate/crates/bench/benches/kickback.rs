//! Backend scaling: the dense statevector against the phase-vector route,
//! plus the transform and solver primitives both lean on.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use gpk_bench::random_table;
use gpk_core::rng::SplitMix64;
use gpk_core::{
    fwht_inplace, gpk_run, random_promise_instance, solve_generalized_dj, Backend, BitString,
    F2LinearSystem, PromiseKind,
};

fn bench_fwht(c: &mut Criterion) {
    let mut group = c.benchmark_group("fwht");
    for bits in [10usize, 14, 18] {
        let values: Vec<f64> = (0..1usize << bits)
            .map(|i| if i % 3 == 0 { 1.0 } else { -1.0 })
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(bits), &values, |b, values| {
            b.iter_batched_ref(
                || values.clone(),
                |buf| fwht_inplace(black_box(buf)),
                BatchSize::LargeInput,
            )
        });
    }
    group.finish();
}

fn bench_gpk_run(c: &mut Criterion) {
    let mut group = c.benchmark_group("gpk_run");
    let m = 2;
    let marker = BitString::unit(m, 0).unwrap();
    for n in [6usize, 10, 14] {
        let f = random_table(n, m, 17);
        for backend in [Backend::Full, Backend::Compact] {
            group.bench_with_input(BenchmarkId::new(backend.to_string(), n), &f, |b, f| {
                b.iter(|| gpk_run(black_box(f), &marker, backend, 5).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_solve_dj(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_generalized_dj");
    for (n, m) in [(8usize, 3usize), (12, 4)] {
        let f = random_promise_instance(n, m, PromiseKind::Balanced, 23).unwrap();
        for backend in [Backend::Full, Backend::Compact] {
            let id = BenchmarkId::new(backend.to_string(), format!("n{n}m{m}"));
            group.bench_with_input(id, &f, |b, f| {
                b.iter(|| solve_generalized_dj(black_box(f), None, backend, 11).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_f2_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("f2_solve");
    for m in [8usize, 16, 24] {
        let mut rng = SplitMix64::new(99);
        let secret = BitString::from_int(m, u64::from(rng.next_bits(m))).unwrap();
        let equations: Vec<(BitString, u8)> = (0..2 * m)
            .map(|_| {
                let row = BitString::from_int(m, u64::from(rng.next_bits(m))).unwrap();
                let rhs = row.dot(&secret).unwrap();
                (row, rhs)
            })
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(m), &equations, |b, equations| {
            b.iter(|| {
                let mut system = F2LinearSystem::new(m).unwrap();
                for &(row, rhs) in equations {
                    system.push(row, rhs).unwrap();
                }
                black_box(system.solve())
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_fwht, bench_gpk_run, bench_solve_dj, bench_f2_solve);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use modspace::{
    brute_force_frame_bounds, fiber_frame_bounds, principal_decompose, sample, theta, FiberContext, GroupSpec, Measure,
    ModInvariantSpace,
};

fn setup(n: usize, lambda: usize, gens: usize, seed: u64) -> (FiberContext, Vec<modspace::Signal>) {
    let g = GroupSpec::cyclic(n).unwrap();
    let ctx = FiberContext::from_generators(&g, &[n / lambda]).unwrap();
    let mut rng = sample::rng(seed);
    let gens = (0..gens)
        .map(|_| sample::signal(&mut rng, &g, modspace::Side::Primal))
        .collect();
    (ctx, gens)
}

fn range_functions(c: &mut Criterion) {
    let mut group = c.benchmark_group("range_function");
    for (n, lambda) in [(64usize, 8usize), (256, 16), (1024, 32)] {
        let (ctx, gens) = setup(n, lambda, 3, 3);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("Z_{n}/|Λ|={lambda}")),
            &gens,
            |b, gens| b.iter(|| ModInvariantSpace::generated(&ctx, black_box(gens.clone())).unwrap()),
        );
    }
    group.finish();
}

fn frame_bounds(c: &mut Criterion) {
    let mut group = c.benchmark_group("frame_bounds");
    group.sample_size(20);
    for (n, lambda) in [(64usize, 8usize), (256, 16)] {
        let (ctx, gens) = setup(n, lambda, 2, 4);
        let label = format!("Z_{n}/|Λ|={lambda}");
        group.bench_with_input(BenchmarkId::new("fiberwise", &label), &gens, |b, gens| {
            b.iter(|| fiber_frame_bounds(&ctx, black_box(gens), Measure::Normalized).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("ambient", &label), &gens, |b, gens| {
            b.iter(|| brute_force_frame_bounds(&ctx, black_box(gens), Measure::Normalized).unwrap())
        });
    }
    group.finish();
}

fn metric_and_decomposition(c: &mut Criterion) {
    let (ctx, gens) = setup(256, 16, 3, 5);
    let v = ModInvariantSpace::generated(&ctx, gens[..2].to_vec()).unwrap();
    let w = ModInvariantSpace::generated(&ctx, gens).unwrap();
    c.bench_function("theta/Z_256", |b| {
        b.iter(|| theta(black_box(&v), black_box(&w)).unwrap())
    });
    c.bench_function("principal_decompose/Z_256", |b| {
        b.iter(|| principal_decompose(black_box(&w)).unwrap())
    });
}

criterion_group!(benches, range_functions, frame_bounds, metric_and_decomposition);
criterion_main!(benches);

//! Sequential vs rayon execution of Monte-Carlo drops, plus the per-drop kernels.
//!
//! Run with: cargo bench -p semrra-core

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use semrra::allocator::solve_semantic;
use semrra::channel::sample_drop;
use semrra::exec::Execution;
use semrra::harness::run_scenario_with;
use semrra::hungarian::{hungarian_max, WeightMatrix};
use semrra::similarity::default_surrogate;
use semrra::{Constraints, RadioParams, ScenarioConfig};

fn scenario_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_scenario");
    group.sample_size(10);
    for drops in [100usize, 500] {
        let cfg = ScenarioConfig {
            n_drops: drops,
            ..ScenarioConfig::default()
        };
        for (name, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(name, drops), &cfg, |b, cfg| {
                b.iter(|| run_scenario_with(black_box(cfg), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn kernels(c: &mut Criterion) {
    let params = RadioParams::default();
    let surface = default_surrogate(20).unwrap();
    let cons = Constraints::default();
    let drop = sample_drop(5, 10, &params, 7).unwrap();

    c.bench_function("sample_drop_5x10", |b| {
        b.iter(|| sample_drop(5, 10, black_box(&params), 7).unwrap())
    });
    c.bench_function("solve_semantic_5x10", |b| {
        b.iter(|| solve_semantic(black_box(&drop), &surface, &cons).unwrap())
    });

    let mut group = c.benchmark_group("hungarian_max");
    for n in [5usize, 20, 60] {
        let w = WeightMatrix::from_fn(n, n, |i, j| ((i * 31 + j * 17) % 23) as f64 + 0.5);
        group.bench_with_input(BenchmarkId::from_parameter(n), &w, |b, w| {
            b.iter(|| hungarian_max(black_box(w)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, scenario_modes, kernels);
criterion_main!(benches);

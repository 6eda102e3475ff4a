use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use symcorr_bench::{damped_ghz, thermo};
use symcorr_core::nonlocality::search_violation;
use symcorr_core::oracle::oracle_bipartite_discord;
use symcorr_core::{genuine_correlations, global_discord, max_violation, Cut, Mode, OracleConfig};

fn genuine(c: &mut Criterion) {
    let mut group = c.benchmark_group("genuine_correlations");
    group.sample_size(10);
    for n in [3, 4, 6] {
        let rho = thermo(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &rho, |b, rho| {
            b.iter(|| genuine_correlations(black_box(rho)).unwrap())
        });
    }
    group.finish();
}

fn global(c: &mut Criterion) {
    let mut group = c.benchmark_group("global_discord_symmetric");
    group.sample_size(10);
    for n in [3, 4, 6] {
        let rho = thermo(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &rho, |b, rho| {
            b.iter(|| global_discord(black_box(rho), Mode::Symmetric).unwrap())
        });
    }
    group.finish();
}

fn svetlichny(c: &mut Criterion) {
    let mut group = c.benchmark_group("svetlichny");
    group.sample_size(10);
    for n in [4, 8, 12] {
        let rho = damped_ghz(n);
        group.bench_with_input(BenchmarkId::new("closed_form", n), &rho, |b, rho| {
            b.iter(|| max_violation(black_box(rho)).unwrap())
        });
    }
    for n in [3, 4] {
        let rho = damped_ghz(n);
        group.bench_with_input(BenchmarkId::new("search", n), &rho, |b, rho| {
            b.iter(|| search_violation(black_box(rho)).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let config = OracleConfig {
        restarts: 8,
        ..OracleConfig::default()
    };
    let rho = thermo(3);
    let cut = Cut::last(3, 2).unwrap();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("bipartite_discord_3q_two_measured", |b| {
        b.iter(|| oracle_bipartite_discord(black_box(&rho), &cut, &config).unwrap())
    });
    group.finish();
}

criterion_group!(benches, genuine, global, svetlichny, oracle);
criterion_main!(benches);

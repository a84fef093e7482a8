//! Timings for the hot paths: classification, decay integrals, the spectral
//! step, box-family ratios and the packet bilinear ratio.

use ckdv_core::quadrature::poly_decay_integral;
use ckdv_core::sharpness::ratio_estimate;
use ckdv_core::spectral::{claim_a_packets, packet_bilinear_ratio, PacketResolution};
use ckdv_core::poly::Polynomial;
use ckdv_core::{classify, DiagonalSystem, FamilyTag, Grid, SpectralState};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::f64::consts::PI;
use std::hint::black_box;

fn classification(c: &mut Criterion) {
    let sys = DiagonalSystem { a1: 1.0, a2: 0.25, c11: 1.0, d11: 1.0, d12: 0.5, ..Default::default() };
    c.bench_function("classify", |b| b.iter(|| classify(black_box(&sys))));
}

fn decay_integral(c: &mut Criterion) {
    let p = Polynomial::new(vec![-4.0, 0.5, 3.0, 1.0]);
    c.bench_function("poly_decay_integral cubic rho=2", |b| {
        b.iter(|| poly_decay_integral(black_box(&p), 2.0).unwrap())
    });
}

fn spectral_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral step");
    for n in [256usize, 1024] {
        let grid = Grid::new(40.0 * PI, n, 1e-4, 1.0).unwrap();
        let sys = DiagonalSystem { a1: 1.0, a2: 2.0, c11: -1.0, d21: -1.0, d22: -1.0, ..Default::default() };
        let x = grid.points();
        let u: Vec<f64> = x.iter().map(|&x| (-((x - 20.0 * PI) / 3.0).powi(2)).exp()).collect();
        let mut state = SpectralState::init(grid, sys, &u, &u).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| b.iter(|| state.step().unwrap()));
    }
    group.finish();
}

fn family_ratio(c: &mut Criterion) {
    c.bench_function("ClaimA ratio at N=1024", |b| {
        b.iter(|| ratio_estimate(FamilyTag::ClaimA, -13.0 / 12.0, 11.0 / 18.0, black_box(1024.0)).unwrap())
    });
}

fn packet_ratio(c: &mut Criterion) {
    let (w1, w2, est, phases) = claim_a_packets(FamilyTag::ClaimA, 64.0).unwrap();
    let res = PacketResolution::default();
    let mut group = c.benchmark_group("packet bilinear ratio");
    group.sample_size(10);
    group.bench_function("ClaimA N=64", |b| {
        b.iter(|| packet_bilinear_ratio(&w1, &w2, est, phases, -1.2, 0.6, res).unwrap())
    });
    group.finish();
}

criterion_group!(benches, classification, decay_integral, spectral_step, family_ratio, packet_ratio);
criterion_main!(benches);

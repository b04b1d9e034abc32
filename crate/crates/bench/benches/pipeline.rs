use std::hint::black_box;
use std::sync::Arc;

use abp_core::abp::lower_contact_set;
use abp_core::geometry::triangulate;
use abp_core::inequalities::{abp_trace, TraceSpec};
use abp_core::pde::{principal_eigen_fem, solve_neumann, Flux, SolverConfig};
use abp_core::{HomogeneousWeight, Polygon};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn disc() -> Polygon {
    Polygon::regular_ngon(512, 1.0).unwrap()
}

fn bench_mesh(c: &mut Criterion) {
    let p = disc();
    let mut g = c.benchmark_group("triangulate_disc");
    for h in [0.08, 0.04, 0.02] {
        g.bench_with_input(BenchmarkId::from_parameter(h), &h, |b, &h| b.iter(|| triangulate(black_box(&p), h).unwrap()));
    }
    g.finish();
}

fn bench_neumann(c: &mut Criterion) {
    let w = HomogeneousWeight::constant();
    let mut g = c.benchmark_group("solve_neumann_disc");
    g.sample_size(10);
    for h in [0.08, 0.04, 0.02] {
        let mesh = Arc::new(triangulate(&disc(), h).unwrap());
        let cfg = SolverConfig { h, ..Default::default() };
        g.bench_with_input(BenchmarkId::from_parameter(h), &h, |b, _| {
            b.iter(|| solve_neumann(mesh.clone(), &w, &Flux::Unit, &cfg).unwrap())
        });
    }
    g.finish();
}

fn bench_contact(c: &mut Criterion) {
    let w = HomogeneousWeight::constant();
    let mut g = c.benchmark_group("lower_contact_set_disc");
    g.sample_size(10);
    for h in [0.08, 0.04] {
        let mesh = Arc::new(triangulate(&disc(), h).unwrap());
        let cfg = SolverConfig { h, ..Default::default() };
        let sol = solve_neumann(mesh, &w, &Flux::Unit, &cfg).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(h), &h, |b, _| b.iter(|| lower_contact_set(&sol.field, None)));
    }
    g.finish();
}

fn bench_eigen(c: &mut Criterion) {
    let mut g = c.benchmark_group("principal_eigen_disc");
    g.sample_size(10);
    for h in [0.08, 0.04] {
        let mesh = Arc::new(triangulate(&disc(), h).unwrap());
        let cfg = SolverConfig { h, ..Default::default() };
        g.bench_with_input(BenchmarkId::from_parameter(h), &h, |b, _| {
            b.iter(|| principal_eigen_fem(mesh.clone(), &cfg).unwrap())
        });
    }
    g.finish();
}

fn bench_trace(c: &mut Criterion) {
    let mut spec = TraceSpec::classical(Polygon::unit_square());
    spec.solver.h = 0.04;
    let mut g = c.benchmark_group("abp_trace");
    g.sample_size(10);
    g.bench_function("unit_square_h0.04", |b| b.iter(|| abp_trace(black_box(&spec))));
    g.finish();
}

criterion_group!(benches, bench_mesh, bench_neumann, bench_contact, bench_eigen, bench_trace);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, Criterion};
use robinlab::asymmetry::{self, PlanarSet};
use robinlab::fem;
use robinlab::geometry::{BoundaryData, DomainSpec};
use robinlab::nodal;
use robinlab::spectra::{self, Bc};
use std::hint::black_box;

fn analytic(c: &mut Criterion) {
    c.bench_function("disk robin spectrum, 2000 eigenvalues", |b| {
        b.iter(|| spectra::disk_robin_spectrum(1.0, Bc::Robin(black_box(-1.0)), 2000).unwrap())
    });
}

fn fem_solve(c: &mut Criterion) {
    let spec = DomainSpec::disk(1.0, BoundaryData::Constant(1.0));
    let mut g = c.benchmark_group("fem");
    g.sample_size(10);
    g.bench_function("disk, target_h 0.03, 10 modes", |b| b.iter(|| fem::fem_spectrum(&spec, 0.03, 10).unwrap()));
    g.finish();
}

fn nodal_counts(c: &mut Criterion) {
    let mut g = c.benchmark_group("nodal");
    g.sample_size(10);
    g.bench_function("square (7,8) rotation grid", |b| {
        b.iter(|| nodal::square_pair_rotation_counts(7, 8, 1.0, 64).unwrap())
    });
    g.finish();
}

fn fraenkel(c: &mut Criterion) {
    let e = PlanarSet::ellipse([0.1, 0.0], 1.0, 0.4, 0.3, 256).unwrap();
    c.bench_function("fraenkel, 256-gon ellipse", |b| b.iter(|| asymmetry::fraenkel(black_box(&e)).unwrap()));
}

criterion_group!(benches, analytic, fem_solve, nodal_counts, fraenkel);
criterion_main!(benches);

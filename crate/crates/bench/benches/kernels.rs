use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symtomo::fock::random_density_state;
use symtomo::positivity::{fourier_slice, search_min_eigenvalue, GramKind, SearchConfig, SliceFunction};
use symtomo::quadrature::DiskGrid;
use symtomo::reconstruction::inverse_radon;
use symtomo::tomogram::{tomogram_via_fft, StateTomogram, TomogramSource};
use symtomo::weyl_heisenberg::{displacement_closed_form, displacement_expm};
use symtomo::{DensityState, PhasePoint};

fn state(dim: usize) -> DensityState {
    random_density_state(dim, dim, &mut ChaCha8Rng::seed_from_u64(7))
}

fn displacement(c: &mut Criterion) {
    let v = PhasePoint::new(0.9, -1.3);
    let mut group = c.benchmark_group("displacement");
    for dim in [16, 32, 64] {
        group.bench_with_input(BenchmarkId::new("closed_form", dim), &dim, |b, &d| {
            b.iter(|| displacement_closed_form(black_box(v), d).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("expm", dim), &dim, |b, &d| {
            b.iter(|| displacement_expm(black_box(v), d).unwrap())
        });
    }
    group.finish();
}

fn tomogram(c: &mut Criterion) {
    let rho = state(8);
    let tom = StateTomogram::new(&rho);
    let v = PhasePoint::new(1.2, 0.7);
    let grid = TomogramSource::from_state(&rho).auto_grid(v, 241).unwrap();
    let xs = grid.points();
    let mut group = c.benchmark_group("tomogram");
    group.bench_function("quadrature_route_241", |b| {
        b.iter(|| xs.iter().map(|&x| tom.eval(black_box(x), v).unwrap()).sum::<f64>())
    });
    group.bench_function("fft_route_241", |b| b.iter(|| tomogram_via_fft(&rho, black_box(&grid), v).unwrap()));
    group.finish();
}

fn slice_transform(c: &mut Criterion) {
    let rho = state(8);
    let v = PhasePoint::new(-1.1, 1.6);
    let mut group = c.benchmark_group("slice_transform");
    for (name, src) in [("vacuum", TomogramSource::Vacuum), ("state_dim8", TomogramSource::from_state(&rho))] {
        group.bench_function(name, |b| b.iter(|| fourier_slice(&src, black_box(v)).unwrap()));
    }
    group.finish();
}

fn certify_trial(c: &mut Criterion) {
    let src = TomogramSource::from_state(&state(6));
    let slice = SliceFunction::new(&src).unwrap();
    let cfg = SearchConfig { trials: 1, tuple_size: 16, seed: 42, radius: 2.0 };
    let mut group = c.benchmark_group("certify_trial");
    for kind in [GramKind::WhGroup, GramKind::OmegaTwisted] {
        group.bench_function(format!("{kind:?}"), |b| {
            b.iter(|| search_min_eigenvalue(kind, |v| slice.eval(v), black_box(&cfg)).unwrap())
        });
    }
    group.finish();
}

fn reconstruction(c: &mut Criterion) {
    let src = TomogramSource::from_state(&state(4));
    let grid = DiskGrid::new(6.0, 32).unwrap();
    let mut group = c.benchmark_group("reconstruction");
    group.sample_size(10);
    group.bench_function("disk_32_dim_16", |b| b.iter(|| inverse_radon(&src, 16, black_box(&grid)).unwrap()));
    group.finish();
}

criterion_group!(benches, displacement, tomogram, slice_transform, certify_trial, reconstruction);
criterion_main!(benches);

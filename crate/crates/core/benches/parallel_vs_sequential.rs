use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fraclap::bench::cases::gaussian_2d;
use fraclap::par::{self, Execution};
use fraclap::solver::Discretization;
use fraclap::weights::weights_2d_quadrature_with;
use fraclap::{Grid, KernelSpec};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn weights_2d(c: &mut Criterion) {
    let spec = KernelSpec::power(2, 1.0, 2.0).unwrap();
    let mut group = c.benchmark_group("weights_2d");
    group.sample_size(10);
    for n in [8usize, 16] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| weights_2d_quadrature_with(&spec, 1, n, 1.0 / n as f64, 1e-10, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn boundary_2d(c: &mut Criterion) {
    let case = gaussian_2d(1.0).unwrap();
    let spec = KernelSpec::power(2, 1.0, 2.0).unwrap();
    let mut group = c.benchmark_group("boundary_2d");
    group.sample_size(10);
    for inv_h in [8usize, 16] {
        let grid = Grid::from_h_2d([-1.0, -1.0], [1.0, 1.0], 1.0 / inv_h as f64).unwrap();
        let disc = Discretization::new(&spec, &grid, 1).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, inv_h), &exec, |b, &exec| {
                b.iter(|| disc.boundary(&case.g, 1e-8, exec).unwrap())
            });
        }
    }
    group.finish();
}

/// Independent right-hand sides, one workspace per product.
fn batched_matvec(c: &mut Criterion) {
    let mut group = c.benchmark_group("batched_matvec");
    let cases = [(1usize, 1.0 / 1024.0), (2, 1.0 / 32.0)];
    for (d, h) in cases {
        let spec = KernelSpec::power(d, 1.0, 2.0).unwrap();
        let grid = match d {
            1 => Grid::from_h_1d(-1.0, 1.0, h).unwrap(),
            _ => Grid::from_h_2d([-1.0, -1.0], [1.0, 1.0], h).unwrap(),
        };
        let disc = Discretization::new(&spec, &grid, 1).unwrap();
        let n = disc.op.len();
        let batch: Vec<Vec<f64>> = (0..32).map(|j| (0..n).map(|i| ((i * 31 + j * 17) % 97) as f64 / 97.0).collect()).collect();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, format!("{d}d")), &exec, |b, &exec| {
                b.iter(|| {
                    par::map(exec, batch.len(), |j| {
                        let mut ws = disc.op.workspace();
                        let mut y = vec![0.0; n];
                        disc.op.apply(&batch[j], &mut y, &mut ws).unwrap();
                        black_box(y)
                    })
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, weights_2d, boundary_2d, batched_matvec);
criterion_main!(benches);

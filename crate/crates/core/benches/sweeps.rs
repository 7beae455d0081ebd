use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use conformable_gegenbauer::alphapoly::{integer, Alpha};
use conformable_gegenbauer::parallel::Execution;
use conformable_gegenbauer::quadrature::{orthogonality_report, NormGrid, QuadratureConfig};
use conformable_gegenbauer::verify::{constructor_agreement, ode_annihilation, Grid};

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn identity_sweep(c: &mut Criterion) {
    let grid = Grid::standard().with_n_max(8);
    let mut group = c.benchmark_group("identity_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("constructors+ode", name), &exec, |b, &exec| {
            b.iter(|| {
                assert!(constructor_agreement(&grid, exec).passed());
                assert!(ode_annihilation(&grid, exec).passed());
            })
        });
    }
    group.finish();
}

fn quadrature_sweep(c: &mut Criterion) {
    let grid = NormGrid {
        n_max: 8,
        lambdas: vec![integer(1), integer(3)],
        alphas: ["1/2", "1"].iter().map(|a| Alpha::parse(a).unwrap()).collect(),
    };
    let cfg = QuadratureConfig::default();
    let mut group = c.benchmark_group("quadrature_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("orthogonality", name), &exec, |b, &exec| {
            b.iter(|| assert!(orthogonality_report(&grid, &cfg, 1e-8, exec).unwrap().passed()))
        });
    }
    group.finish();
}

criterion_group!(benches, identity_sweep, quadrature_sweep);
criterion_main!(benches);

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use voi_core::engine::{voi_curve_with, BetaGrid};
use voi_core::geometry::{Family, Model};
use voi_core::measure::{LogBase, ProbVector};
use voi_core::oracle;
use voi_core::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn generic_sweep(c: &mut Criterion) {
    let grid = BetaGrid::default().points().unwrap();
    let mut group = c.benchmark_group("generic_curve");
    group.sample_size(10);
    for n in [64, 256, 1024] {
        let model = Model::bundled(Family::UnitCircleRoot, n).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &model, |b, m| {
                b.iter(|| voi_curve_with(m, black_box(&grid), LogBase::Bits, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn closed_form_sweep(c: &mut Criterion) {
    let grid = BetaGrid {
        count: 2000,
        ..BetaGrid::default()
    }
    .points()
    .unwrap();
    let model = Model::bundled(Family::UnitCircleLog, 1024).unwrap();
    let mut group = c.benchmark_group("closed_form_curve");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| voi_curve_with(&model, black_box(&grid), LogBase::Bits, exec).unwrap())
        });
    }
    group.finish();
}

fn oracle_sweep(c: &mut Criterion) {
    let model = Model::bundled(Family::UnitCircleRoot, 32).unwrap();
    let cost = model.problem().cost().clone();
    let prior = ProbVector::uniform(32);
    let grid = BetaGrid {
        count: 32,
        max: 10.0,
        ..BetaGrid::default()
    }
    .points()
    .unwrap();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                oracle::solve_many(&prior, &cost, black_box(&grid), 1e-10, 100_000, exec).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, generic_sweep, closed_form_sweep, oracle_sweep);
criterion_main!(benches);

//! Node-parallel vs single-threaded cost of the hot paths. The single-thread
//! variant runs the same code inside a one-thread rayon pool; build with
//! `--no-default-features` to measure the fully sequential code path.

use std::hint::black_box;
use std::sync::Arc;

use alphaflow::body::make_body;
use alphaflow::{BodySpec, FlowState, Mode, RescaledState, SphereGrid};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn perturbed(grid: Arc<SphereGrid>) -> alphaflow::SupportField {
    let spec = BodySpec::PerturbedSphere {
        radius: 1.0,
        modes: vec![
            Mode { degree: 2, order: 0, amplitude: 0.05 },
            Mode { degree: 4, order: 2, amplitude: 0.02 },
        ],
    };
    make_body(&spec, grid).unwrap()
}

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("rayon", rayon::ThreadPoolBuilder::new().build().unwrap()),
        ("single", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
    ]
}

fn physical_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("physical_step");
    for (nt, np) in [(32, 64), (64, 128)] {
        let grid = Arc::new(SphereGrid::sphere(nt, np).unwrap());
        let state = FlowState::new(perturbed(grid), 1.0).unwrap();
        for (name, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(name, format!("{nt}x{np}")), &state, |b, s| {
                b.iter(|| pool.install(|| black_box(s.step().unwrap())))
            });
        }
    }
    group.finish();
}

fn curvature(c: &mut Criterion) {
    let mut group = c.benchmark_group("curvature_summary");
    let grid = Arc::new(SphereGrid::sphere(128, 256).unwrap());
    let body = perturbed(grid);
    for (name, pool) in pools() {
        group.bench_function(name, |b| {
            b.iter(|| {
                pool.install(|| {
                    // Fresh field each time so the geometry cache is rebuilt.
                    let fresh = body.scaled(1.0);
                    black_box(fresh.curvature_summary().unwrap())
                })
            })
        });
    }
    group.finish();
}

fn rescaled_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("rescaled_step_circle");
    let grid = Arc::new(SphereGrid::circle(512).unwrap());
    let state = RescaledState::new(perturbed(grid), 1.0 / 3.0).unwrap();
    for (name, pool) in pools() {
        group.bench_function(name, |b| b.iter(|| pool.install(|| black_box(state.step().unwrap()))));
    }
    group.finish();
}

criterion_group!(benches, physical_step, curvature, rescaled_step);
criterion_main!(benches);

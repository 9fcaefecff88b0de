use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use homoclinic::constants;
use homoclinic::ineqlab;
use homoclinic::mpsolve::{self, Discretization, SolverSettings};
use homoclinic::par::Execution;
use homoclinic::Potential;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn small_settings(exec: Execution) -> SolverSettings {
    SolverSettings {
        domain_length: 20.0,
        grid_points: 801,
        path_points: 21,
        ..SolverSettings::default()
    }
    .with_execution(exec)
}

fn path(c: &mut Criterion) {
    let mut g = c.benchmark_group("mountain_pass");
    g.sample_size(10).measurement_time(Duration::from_secs(10));
    let disc = Discretization::symmetric(20.0, 801, 0.6, Potential::Bridge).unwrap();
    let end = mpsolve::endpoint_for(&disc).unwrap();
    for (name, exec) in MODES {
        let s = small_settings(exec);
        g.bench_with_input(BenchmarkId::new("path", name), &s, |b, s| {
            b.iter(|| {
                mpsolve::mountain_pass(&disc, black_box(&end.profile), s)
                    .unwrap()
                    .c_beta
            })
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10).measurement_time(Duration::from_secs(20));
    let betas = [0.5, 0.6, 0.7];
    for (name, exec) in MODES {
        let s = small_settings(exec);
        g.bench_with_input(BenchmarkId::new("three_betas", name), &s, |b, s| {
            b.iter(|| mpsolve::sweep(black_box(&betas), Potential::Bridge, 1.62, s, false).unwrap())
        });
    }
    g.finish();
}

fn scans(c: &mut Criterion) {
    let mut g = c.benchmark_group("scans");
    let ks = [2.0, 2.34, 2.5, 3.0];
    let as_ = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0];
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new("beta_star", name), |b| {
            b.iter(|| constants::beta_star_bisect_with(black_box(1.62), exec).unwrap())
        });
        g.bench_function(BenchmarkId::new("quadform_200", name), |b| {
            b.iter(|| {
                ineqlab::quad_form_trials(200, 0, std::f64::consts::SQRT_2, 1.0, exec).unwrap()
            })
        });
        g.bench_function(BenchmarkId::new("l1_grid", name), |b| {
            b.iter(|| ineqlab::l1_grid(black_box(&ks), &as_, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, path, sweep, scans);
criterion_main!(benches);

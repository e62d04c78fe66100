//! Sequential (one worker) against parallel (global pool) runs of the same
//! workloads. Build with `--no-default-features` to time the fallback path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pebbling::families::{cycle, petersen, FamilySpec};
use pebbling::repro::lemke_instances;
use pebbling::thresholds::{estimate, Model, TrialConfig};
use pebbling::{lemke, par, pebbling_number, Graph, Options};

const MODES: [(&str, usize); 2] = [("sequential", 1), ("parallel", 0)];

fn numbers(c: &mut Criterion) {
    let graphs: Vec<(&str, Graph)> = vec![
        ("cycle9", cycle(9)),
        ("petersen", petersen()),
        ("grid2x2", "grid:2,2".parse::<FamilySpec>().unwrap().generate().unwrap()),
    ];
    let mut group = c.benchmark_group("pebbling_number");
    group.sample_size(10);
    for (name, g) in &graphs {
        for (mode, jobs) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, name), g, |b, g| {
                b.iter(|| par::with_jobs(jobs, || pebbling_number(g, None, &Options::default()).unwrap()))
            });
        }
    }
    group.finish();
}

fn thresholds(c: &mut Criterion) {
    let cfg = TrialConfig::new(2000, 7);
    let mut group = c.benchmark_group("threshold_estimate");
    group.sample_size(10);
    for (model, n, t) in [(Model::Path, 40, 600), (Model::Clique, 200, 14), (Model::Wheel, 60, 30)] {
        let name = format!("{model:?}_{n}");
        for (mode, jobs) in MODES {
            group.bench_function(BenchmarkId::new(mode, &name), |b| {
                b.iter(|| par::with_jobs(jobs, || estimate(&model, n, t, &cfg).unwrap()))
            });
        }
    }
    group.finish();
}

fn zero_sums(c: &mut Criterion) {
    let instances = lemke_instances(42, 500);
    let mut group = c.benchmark_group("lemke_batch");
    group.sample_size(10);
    for (mode, jobs) in MODES {
        group.bench_function(mode, |b| {
            b.iter(|| {
                par::with_jobs(jobs, || {
                    par::map(instances.clone(), |(xs, q)| lemke::solve(&xs, q).unwrap().indices.len())
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, numbers, thresholds, zero_sums);
criterion_main!(benches);

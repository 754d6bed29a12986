//! Sequential versus rayon-parallel kernels: sparse matvec, a fixed number
//! of PDHG iterations, and ladder generation.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lp_asympt_core::gen::{generate_ladder, FamilyId, LadderSpec};
use lp_asympt_core::par::Parallelism;
use lp_asympt_core::pdhg::{solve_pdhg, PdhgConfig};
use std::hint::black_box;

const MODES: [(&str, Parallelism); 2] = [
    ("sequential", Parallelism::Sequential),
    ("parallel", Parallelism::Parallel),
];

fn largest_rung(family: FamilyId) -> lp_asympt_core::lp::LpProblem {
    let spec = LadderSpec::desk(family, 10, 1).unwrap();
    generate_ladder(&spec, Parallelism::Parallel)
        .unwrap()
        .pop()
        .unwrap()
        .1
}

fn matvec(c: &mut Criterion) {
    let p = largest_rung(FamilyId::UnitCommit);
    let a = p.matrix();
    let x = vec![1.0; a.n_cols()];
    let mut out = vec![0.0; a.n_rows()];
    let mut g = c.benchmark_group("matvec_unitcommit");
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| a.matvec_into(black_box(&x), &mut out, mode).unwrap())
        });
    }
    g.finish();
}

fn pdhg_iterations(c: &mut Criterion) {
    let p = largest_rung(FamilyId::Scnd);
    let mut g = c.benchmark_group("pdhg_200_iterations_scnd");
    g.sample_size(10);
    for (name, mode) in MODES {
        let cfg = PdhgConfig {
            max_iterations: 200,
            parallelism: mode,
            ..Default::default()
        };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| solve_pdhg(black_box(&p), &cfg).unwrap())
        });
    }
    g.finish();
}

fn ladder_generation(c: &mut Criterion) {
    let spec = LadderSpec::desk(FamilyId::TelecomNd, 10, 1).unwrap();
    let mut g = c.benchmark_group("generate_ladder_telecomnd");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| generate_ladder(black_box(&spec), mode).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, matvec, pdhg_iterations, ladder_generation);
criterion_main!(benches);

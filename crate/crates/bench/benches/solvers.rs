use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use minres_bench::{figure_pair, newton_parallel};
use minres_core::exprlang::parse;
use minres_core::model::Branch;
use minres_core::{critical_values, oracle, solve, PressureModel, SolverConfig};

fn criticals(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let newton = PressureModel::newton(1.0, 0.0).unwrap();
    let user = PressureModel::parse_law("1/(1+u^2)+0.5").unwrap();
    c.bench_function("critical_values/newton", |b| {
        b.iter(|| critical_values(black_box(&newton), &cfg).unwrap())
    });
    c.bench_function("critical_values/expression", |b| {
        b.iter(|| critical_values(black_box(&user), &cfg).unwrap())
    });
}

fn expressions(c: &mut Criterion) {
    let text = "0.5/(1+u^2) - 0.5 + exp(-u)*ln(1+u)";
    c.bench_function("exprlang/parse", |b| b.iter(|| parse(black_box(text)).unwrap()));
    let e = parse(text).unwrap();
    c.bench_function("exprlang/eval2", |b| b.iter(|| e.eval2(black_box(1.3)).unwrap()));
}

fn solvers(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let planar = figure_pair(2, 2.0, 6.0);
    c.bench_function("solve/planar_double_triangle", |b| {
        b.iter(|| solve(black_box(&planar), &cfg).unwrap())
    });
    let classical = newton_parallel(3, 1.0, 1.0845482255552044);
    c.bench_function("solve/newton_d3", |b| {
        b.iter(|| solve(black_box(&classical), &cfg).unwrap())
    });
    let split = figure_pair(3, 1.0, 3.0);
    c.bench_function("solve/split_d3", |b| b.iter(|| solve(black_box(&split), &cfg).unwrap()));
}

fn oracles(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let spec = figure_pair(2, 2.0, 1.0);
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("brute_force_200x400", |b| {
        b.iter(|| oracle::brute_force(&spec, Branch::Front, 1.0, 200, 400, 8.0, &cfg).unwrap())
    });
    let sol = solve(&spec, &cfg).unwrap();
    group.bench_function("maximality_200x400", |b| {
        b.iter(|| {
            oracle::check_maximality(&spec, Branch::Front, &sol.front, 0.5, 200, 400, 20.0).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, criticals, expressions, solvers, oracles);
criterion_main!(benches);

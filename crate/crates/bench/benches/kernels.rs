use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use horo_core::hyperbolic::dist_h;
use horo_core::walks::srw_run;
use horo_core::*;

fn graphs(c: &mut Criterion) {
    let g = DlGraph::new(2, 3).unwrap();
    let origin = DlVertex::origin();
    let far: DlVertex = "3:1011/-3:21202".parse().unwrap();
    c.bench_function("dl_formula_dist", |b| {
        b.iter(|| g.formula_dist(black_box(&origin), black_box(&far)))
    });
    c.bench_function("dl_bfs_ball_r5", |b| b.iter(|| g.bfs_ball(black_box(&origin), 5).unwrap()));

    let x = LampEl::new(Config::delta(3, 4, 2), 7);
    let y = LampEl::new(Config::delta(3, -2, 1), -3);
    c.bench_function("lamplighter_compose", |b| b.iter(|| black_box(&x).compose(black_box(&y)).unwrap()));
    c.bench_function("lamplighter_encode", |b| b.iter(|| DlVertex::from_lamplighter(black_box(&x))));
}

fn metrics(c: &mut Criterion) {
    let a = HPoint::new(-0.3, 0.7).unwrap();
    let z = HPoint::new(1.2, 2.5).unwrap();
    c.bench_function("dist_h", |b| b.iter(|| dist_h(black_box(a), black_box(z))));

    let ht = Treebolic::new(2, 2.0).unwrap();
    let u = ht.point(TreePoint::Vertex("1:0".parse().unwrap()), -0.3);
    let v = ht.point(TreePoint::Vertex("1:1".parse().unwrap()), 0.5);
    c.bench_function("treebolic_dist_crossing", |b| b.iter(|| ht.dist(black_box(&u), black_box(&v))));

    let sol = Sol::new(1.0, 2.0).unwrap();
    let p = SolEl::new(-1.0, 0.5, 0.2);
    let q = SolEl::new(1.5, -1.0, -0.7);
    let mut group = c.benchmark_group("sol");
    group.sample_size(10);
    group.bench_function("dist_upper", |b| b.iter(|| sol.dist_upper(black_box(&p), black_box(&q))));
    group.finish();
}

fn walks(c: &mut Criterion) {
    let cfg = WalkConfig::new(WalkSpace::Dl { p: 2, q: 3 }, 1000, 64, 1).unwrap();
    let mut group = c.benchmark_group("walks");
    group.sample_size(20);
    group.bench_function("dl23_1000x64", |b| b.iter(|| srw_run(black_box(&cfg)).unwrap()));
    group.finish();
}

criterion_group!(benches, graphs, metrics, walks);
criterion_main!(benches);

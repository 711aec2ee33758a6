use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use liesplit_bench::{random_element, random_matrix};
use liesplit_core::hilton::Mode;
use liesplit_core::liealg::lie_module;
use liesplit_core::sgmod::is_projective;
use liesplit_core::*;

fn linear_algebra(c: &mut Criterion) {
    let mut g = c.benchmark_group("linalg");
    for (p, e) in [(2, 1), (3, 1), (2, 4)] {
        let field = make_field(p, e).unwrap();
        let m = random_matrix(&field, 200, 200, 11);
        g.bench_function(format!("rank_200_gf{}", field.order()), |b| b.iter(|| black_box(&m).rank(&field)));
    }
    g.finish();
}

fn group_algebra(c: &mut Criterion) {
    let field = make_field(2, 2).unwrap();
    let a = random_element(&field, 5, 3);
    let b = random_element(&field, 5, 4);
    c.bench_function("mul_s5_gf4", |x| x.iter(|| black_box(&a).mul(&b).unwrap()));
    c.bench_function("eventual_idempotent_s5_gf4", |x| x.iter(|| eventual_idempotent(black_box(&a))));
}

fn lie_powers(c: &mut Criterion) {
    let field = make_field(2, 1).unwrap();
    c.bench_function("lyndon_basis_10_2", |b| b.iter(|| lyndon_basis(black_box(10), 2, &field).unwrap()));
    let (module, _) = lie_module(5, &field).unwrap();
    c.bench_function("is_projective_lie5_gf2", |b| b.iter(|| is_projective(black_box(&module)).unwrap()));
}

fn reports(c: &mut Criterion) {
    let mut g = c.benchmark_group("reports");
    g.sample_size(10);
    g.bench_function("block_p2_cap5", |b| b.iter(|| block_decomposition(2, black_box(5)).unwrap()));
    let field = make_field(2, 1).unwrap();
    g.bench_function("split_3_6_cap6", |b| b.iter(|| splitness_check(&[3, 6], black_box(6), 2, &field).unwrap()));
    let ms = MSet::Finite(vec![(3, Some(3))]);
    g.bench_function("hilton_explicit_12", |b| {
        b.iter(|| verify_theorem61(&ms, 2, black_box(12), 2, Mode::Explicit).unwrap())
    });
    g.finish();
}

criterion_group!(benches, linear_algebra, group_algebra, lie_powers, reports);
criterion_main!(benches);

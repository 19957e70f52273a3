use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use grl_core::exactalg::{smith_normal_form, Field, IntegerMatrix};
use grl_core::fds::random::{random_exact_triangle, random_split_family};
use grl_core::fds::{les_collapse_isomorphism, split_report};
use grl_core::groups::{catalog, conjugacy_count, todd_coxeter, Budget, GroupClass};
use grl_core::handles::build_np;
use grl_core::verdict::{np_verdict, replay};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn integer_matrix(rng: &mut ChaCha8Rng, n: usize) -> IntegerMatrix {
    let entries = (0..n * n).map(|_| rng.gen_range(-9i64..=9).into()).collect();
    IntegerMatrix::new(n, n, entries).unwrap()
}

fn exactalg(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    c.bench_function("snf_12x12", |b| {
        b.iter_batched(|| integer_matrix(&mut rng, 12), |m| smith_normal_form(&m), BatchSize::SmallInput)
    });
}

fn fds(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    c.bench_function("les_collapse", |b| {
        b.iter_batched(
            || random_exact_triangle(&mut rng, Field::F2, 8, 2),
            |t| les_collapse_isomorphism(&t).unwrap(),
            BatchSize::SmallInput,
        )
    });
    c.bench_function("split_report", |b| {
        b.iter_batched(
            || random_split_family(&mut rng, Field::F2, 3, 8),
            |f| split_report(&f).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn groups(c: &mut Criterion) {
    let a5 = catalog::alternating5();
    c.bench_function("todd_coxeter_a5", |b| b.iter(|| todd_coxeter(black_box(&a5), 100_000).unwrap()));
    let ico = catalog::binary_icosahedral();
    c.bench_function("todd_coxeter_binary_icosahedral", |b| {
        b.iter(|| todd_coxeter(black_box(&ico), 100_000).unwrap())
    });
    let z3 = GroupClass::FreeAbelian { rank: 3 };
    c.bench_function("conjugacy_count_z3_40", |b| b.iter(|| conjugacy_count(black_box(&z3), 40).unwrap()));
}

fn pipeline(c: &mut Criterion) {
    let ico = catalog::binary_icosahedral();
    c.bench_function("build_np_icosahedral", |b| b.iter(|| build_np(black_box(&ico), 8).unwrap()));
    c.bench_function("np_verdict_and_replay", |b| {
        b.iter(|| replay(&np_verdict(black_box(&ico), 8, Budget::default()).unwrap()).unwrap())
    });
}

criterion_group!(benches, exactalg, fds, groups, pipeline);
criterion_main!(benches);

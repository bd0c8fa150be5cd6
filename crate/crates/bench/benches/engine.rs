use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use glab_core::dualizing::omega_module;
use glab_core::families::{falsify, instantiate, verify_instance, CrimpingParams, FamilyId};
use glab_core::germ::closure;
use glab_core::DEFAULT_TRUNCATION as K;

fn member(id: FamilyId, b: usize) -> glab_core::FamilyInstance {
    instantiate(id, b, &CrimpingParams::simplified(id, b), K).unwrap()
}

fn bench_closure(c: &mut Criterion) {
    let mut g = c.benchmark_group("closure");
    for (id, b) in [
        (FamilyId::H4odd, 1),
        (FamilyId::H22odd, 4),
        (FamilyId::H1111, 6),
    ] {
        let inst = member(id, b);
        let gens = inst.elements();
        g.bench_function(format!("{id}_b{b}"), |bench| {
            bench.iter(|| closure(black_box(&gens), b, K).unwrap())
        });
    }
    g.finish();
}

fn bench_omega(c: &mut Criterion) {
    let mut g = c.benchmark_group("omega_module");
    for (id, b) in [(FamilyId::H4odd, 1), (FamilyId::H1111, 6)] {
        let r = member(id, b).germ().unwrap();
        g.bench_function(format!("{id}_b{b}"), |bench| {
            bench.iter(|| omega_module(black_box(&r)).unwrap())
        });
    }
    g.finish();
}

fn bench_verify(c: &mut Criterion) {
    let inst = member(FamilyId::H211, 5);
    c.bench_function("verify_instance/H211_b5", |bench| {
        bench.iter(|| verify_instance(black_box(&inst)))
    });
}

fn bench_falsify(c: &mut Criterion) {
    let mut g = c.benchmark_group("falsify");
    g.sample_size(10);
    g.bench_function("profile_2_1_b4_x20", |bench| {
        bench.iter(|| falsify(black_box(&[2, 1]), 4, 20, 1).unwrap())
    });
    g.finish();
}

criterion_group!(
    benches,
    bench_closure,
    bench_omega,
    bench_verify,
    bench_falsify
);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gitwin_bench::{fan_weights, mixed_problem, twist};
use gitwin_core::gitcore::{kn_stratification, Support};
use gitwin_core::gradedmod::{koszul_skyscraper, minimize, window_lift, WeightedRing};
use gitwin_core::optimal_destabilizer;
use gitwin_core::vgit::git_fan;

fn stratification(c: &mut Criterion) {
    let p = mixed_problem();
    c.bench_function("kempf_full_support", |b| b.iter(|| optimal_destabilizer(black_box(&p), Support::full(6))));
    c.bench_function("kn_stratification_rank3_dim6", |b| b.iter(|| kn_stratification(black_box(&p))));
}

fn fan(c: &mut Criterion) {
    let w = fan_weights();
    c.bench_function("git_fan_rank2_six_weights", |b| b.iter(|| git_fan(2, black_box(&w))));
}

fn graded(c: &mut Criterion) {
    let ring = WeightedRing::standard(3);
    let k = koszul_skyscraper(&ring, 0, 2).expect("positive multiplicity");
    c.bench_function("minimize_koszul_pair", |b| b.iter(|| minimize(black_box(&k))));
    let low = twist(-3);
    c.bench_function("window_lift_twist_minus_three", |b| b.iter(|| window_lift(black_box(&low), 0)));
}

criterion_group!(benches, stratification, fan, graded);
criterion_main!(benches);

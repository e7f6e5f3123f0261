use std::hint::black_box;

use chowlab::abelian::{cohomology_model, curve_class, divisor_model, pontryagin_power, theta_model};
use chowlab::constructions::{blowup_transfer_check, BlowupData};
use chowlab::lefschetz::{check_conj1, check_hl_cohomology, check_kunnemann};
use chowlab::linalg::frac;
use chowlab::sympow::{extract_system, pbig_det, SymPowMode, SymPowRing};
use criterion::{criterion_group, criterion_main, Criterion};

fn rings(c: &mut Criterion) {
    let s = SymPowRing::new(6, SymPowMode::Formal).unwrap();
    let eq = s.minimal_equation().unwrap();
    c.bench_function("normal form, minimal equation g=6 formal", |b| {
        b.iter(|| s.ring().normal_form(black_box(&eq)))
    });
    c.bench_function("sympow ring g=8 theta", |b| {
        b.iter(|| SymPowRing::new(black_box(8), SymPowMode::Theta).unwrap())
    });
    let t = theta_model(8).unwrap();
    let curve = curve_class(&t).unwrap();
    c.bench_function("pontryagin power g=8 r=8", |b| {
        b.iter(|| pontryagin_power(&t, black_box(&curve), 8).unwrap())
    });
}

fn checks(c: &mut Criterion) {
    let h = cohomology_model(4).unwrap();
    c.bench_function("hard lefschetz g=4 k=4", |b| b.iter(|| check_hl_cohomology(&h, black_box(4)).unwrap()));

    let d = divisor_model(6).unwrap();
    c.bench_function("kunnemann g=6 p=3 s=0", |b| b.iter(|| check_kunnemann(&d, black_box(3), 0).unwrap()));

    let s = SymPowRing::new(6, SymPowMode::Theta).unwrap().model().unwrap();
    let z = s.ring().gen("z").unwrap();
    c.bench_function("conj1 sympow g=6 p=3", |b| b.iter(|| check_conj1(&s, &z, black_box(3)).unwrap()));

    let data = BlowupData::linear(6, 2).unwrap();
    let hyper = data.x().gen("H").unwrap();
    let m = frac(-1, 3);
    c.bench_function("blow-up transfer P2 in P6 p=2", |b| {
        b.iter(|| blowup_transfer_check(&data, &hyper, &m, black_box(2)).unwrap())
    });
}

fn systems(c: &mut Criterion) {
    c.bench_function("extract system g=6 p=3", |b| b.iter(|| extract_system(black_box(6), 3).unwrap()));
    c.bench_function("pbig determinant g=12 p=6", |b| b.iter(|| pbig_det(black_box(12), 6).unwrap()));
}

criterion_group!(benches, rings, checks, systems);
criterion_main!(benches);

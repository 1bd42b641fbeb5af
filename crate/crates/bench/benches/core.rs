//! Benchmarks for the hot paths: normal forms, reduction, ball building,
//! and bigon scans. Word sizes are chosen so one iteration stays in the
//! microsecond-to-millisecond range on a single core.

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relhyp::artin::dehn_solve;
use relhyp::sampling::{random_pair_word, relator_conjugate_product};
use relhyp::{
    bigon_scan, BallOptions, ConedBall, DehnOptions, DihedralPair, GroupSpec, ScanCaps, ScanMode,
};
use std::hint::black_box;

fn e7() -> GroupSpec {
    GroupSpec::uniform(3, 7)
}

fn ball(spec: &GroupSpec, radius: u64, slack: u64) -> ConedBall {
    ConedBall::build(
        spec,
        &BallOptions {
            radius,
            slack,
            ..BallOptions::default()
        },
    )
    .expect("ball fits the default cap")
}

fn normal_forms(c: &mut Criterion) {
    let pair = DihedralPair::new(1, 2, 7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let w = random_pair_word(&mut rng, 1, 2, 300);
    c.bench_function("garside_nf_300_letters", |b| {
        b.iter(|| pair.garside_nf(black_box(&w)).unwrap())
    });
    c.bench_function("amalgam_nf_300_letters", |b| {
        b.iter(|| pair.amalgam_nf(black_box(&w)).unwrap())
    });
}

fn reduction(c: &mut Criterion) {
    let spec = e7();
    let opts = DehnOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let trivial = relator_conjugate_product(&mut rng, &spec, 3, 3).unwrap();
    c.bench_function("dehn_solve_three_relators", |b| {
        b.iter(|| dehn_solve(black_box(&spec), black_box(&trivial), &opts).unwrap())
    });
}

fn ball_build(c: &mut Criterion) {
    let spec = e7();
    c.bench_function("ball_build_r2_s1", |b| {
        b.iter(|| ball(black_box(&spec), 2, 1))
    });
}

fn scans(c: &mut Criterion) {
    let spec = e7();
    let small = ball(&spec, 2, 1);
    let enlarged = ball(&spec, 3, 2);
    let caps = ScanCaps::default();
    c.bench_function("vertex_scan_r2", |b| {
        b.iter(|| {
            bigon_scan(
                black_box(&small),
                Some(&enlarged),
                ScanMode::VertexBigons,
                &caps,
                1,
            )
        })
    });
    c.bench_function("claim_scan_r2", |b| {
        b.iter(|| {
            bigon_scan(
                black_box(&small),
                Some(&enlarged),
                ScanMode::ClaimQuadrilaterals,
                &caps,
                1,
            )
        })
    });
}

criterion_group!(benches, normal_forms, reduction, ball_build, scans);
criterion_main!(benches);

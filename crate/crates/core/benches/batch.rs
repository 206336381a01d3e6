use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use toric_lpr::exec::Exec;
use toric_lpr::mcg_homology::brute_force_classes;
use toric_lpr::orbit::classify_batch;
use toric_lpr::{ConstructionParams, QField};

fn levels(p: &ConstructionParams, count: i64) -> Vec<QField> {
    let top = &p.c - &p.eps;
    let surd = "0/1+1/64*sqrt(2)".parse::<QField>().unwrap();
    (0..count)
        .map(|i| {
            let h = &top * &QField::from_ratio(i, count);
            // every other level irrational, so both orbit kinds are exercised
            if i % 2 == 1 { &h + &surd } else { h }
        })
        .collect()
}

fn bench_orbits(c: &mut Criterion) {
    let p = ConstructionParams::parse("4", "2", "1/2", "1/8").unwrap();
    let hs = levels(&p, 32);
    let mut g = c.benchmark_group("classify_batch");
    g.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_with_input(BenchmarkId::new(format!("{exec:?}"), hs.len()), &hs, |b, hs| {
            b.iter(|| classify_batch(black_box(&p), hs, 2000, exec))
        });
    }
    g.finish();
}

fn bench_classes(c: &mut Criterion) {
    let mut g = c.benchmark_group("brute_force_classes");
    g.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        g.bench_with_input(BenchmarkId::new(format!("{exec:?}"), 40), &40, |b, &bound| {
            b.iter(|| brute_force_classes(black_box(bound), exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_orbits, bench_classes);
criterion_main!(benches);

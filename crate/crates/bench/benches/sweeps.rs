use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use urcorner::theorem::CornerSetting;
use urcorner::{run_shift_demo, verify_star_and_corollary};
use urcorner_bench::{band, ring};

fn unit_groups(c: &mut Criterion) {
    let mut group = c.benchmark_group("unit_group");
    for spec in ["M2(Z3)", "T3(Z3)", "M2(Z5)"] {
        group.bench_with_input(BenchmarkId::from_parameter(spec), spec, |b, spec| {
            // a fresh ring each time, the unit table is cached per ring
            b.iter(|| ring(spec).unit_group().len())
        });
    }
    group.finish();
}

fn corner_sweeps(c: &mut Criterion) {
    let r = ring("M2(Z3)");
    let idems = r.idempotents().to_vec();
    c.bench_function("verdicts/M2(Z3)", |b| {
        b.iter(|| idems.iter().map(|&idem| CornerSetting::new(&r, idem).verdicts().unwrap().len()).sum::<usize>())
    });
    c.bench_function("star_corollary/M2(Z3)", |b| b.iter(|| verify_star_and_corollary(black_box(&r)).passed()));
}

fn band_algebra(c: &mut Criterion) {
    let (p, q) = (band(1, 6), band(2, 6));
    c.bench_function("band/compose", |b| b.iter(|| black_box(&p).compose(black_box(&q))));
    c.bench_function("band/add", |b| b.iter(|| black_box(&p).add(black_box(&q))));
    let mut group = c.benchmark_group("shift_demo");
    for n in [32u64, 128, 512] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| run_shift_demo(n).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, unit_groups, corner_sweeps, band_algebra);
criterion_main!(benches);

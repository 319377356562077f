use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use symdet::quadform::{classify, value_histogram_brute};
use symdet::spectrum::{Session, StratumTally};
use symdet::symmat::Enumerator;
use symdet::SquareClass;
use symdet_bench::{all_matrices, field, warm_session};

fn enumeration(c: &mut Criterion) {
    let f = field(5);
    let mut g = c.benchmark_group("enumeration");
    g.sample_size(10);
    g.bench_function("count nonzero S_3 q=5", |b| {
        b.iter(|| {
            Enumerator::new(&f, 3)
                .with_workers(Some(1))
                .fold(
                    || 0u64,
                    |acc, a| *acc += a.iter().any(|&x| x != 0) as u64,
                    |x, y| x + y,
                )
                .unwrap()
        })
    });
    g.bench_function("tally S_3 q=5", |b| {
        b.iter(|| StratumTally::enumerate(&f, 3, u64::MAX, Some(1)).unwrap())
    });
    let prev = StratumTally::enumerate(&f, 3, u64::MAX, Some(1)).unwrap();
    g.bench_function("lift S_3 to S_4 q=5", |b| {
        b.iter(|| StratumTally::lift(&f, black_box(&prev)))
    });
    g.finish();
}

fn forms(c: &mut Criterion) {
    let f = field(5);
    let mats = all_matrices(&f, 3);
    let mut g = c.benchmark_group("forms");
    g.bench_function("classify S_3 q=5", |b| {
        b.iter(|| mats.iter().map(|m| classify(&f, m).rank).sum::<usize>())
    });
    g.sample_size(10);
    g.bench_function("value histogram S_3 q=5", |b| {
        b.iter(|| {
            mats.iter()
                .map(|m| value_histogram_brute(&f, m)[0])
                .sum::<u64>()
        })
    });
    g.finish();
}

fn formulas(c: &mut Criterion) {
    let s = warm_session(3, 5);
    let mut g = c.benchmark_group("formulas");
    g.bench_function("weight W_2(3,5) q=3", |b| {
        b.iter(|| {
            s.weight_theorem(2, SquareClass::Square, black_box(3), 5)
                .unwrap()
        })
    });
    g.bench_function("min distance t=3 m=5 q=3", |b| {
        b.iter(|| s.min_distance(black_box(3), 5).unwrap())
    });
    g.sample_size(10);
    g.bench_function("cold session W_1(2,4) q=5", |b| {
        b.iter_batched(
            || Session::new(field(5)).with_workers(Some(1)),
            |s| s.weight_theorem(1, SquareClass::Square, 2, 4).unwrap(),
            BatchSize::PerIteration,
        )
    });
    g.finish();
}

criterion_group!(benches, enumeration, forms, formulas);
criterion_main!(benches);

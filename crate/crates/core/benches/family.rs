//! Sequential vs. parallel throughput of the data-parallel stages.
//!
//! "sequential" runs inside a one-thread rayon pool, "parallel" on the
//! default pool. Build with `--no-default-features` to time the pure
//! sequential fallback instead.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eqrobin::experiment::{Benchmark, BenchmarkRecord};
use eqrobin::random::{chain, random_sbe};
use eqrobin::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Option<usize>); 2] = [("sequential", Some(1)), ("parallel", None)];

fn family(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate_family");
    group.sample_size(10);
    let random12 = random_sbe(&mut ChaCha8Rng::seed_from_u64(12), 12);
    let chain23 = chain(BinOp::And, 23);
    let inputs = [
        ("random_n12", random12, VariantOptions::uncapped()),
        ("and_chain_n23_cap10000", chain23, VariantOptions::default()),
    ];
    for (label, e, opts) in &inputs {
        for (mode, jobs) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, label), e, |b, e| {
                b.iter(|| par::with_jobs(jobs, || generate_family(e, opts).unwrap()))
            });
        }
    }
    group.finish();
}

fn resilience(c: &mut Criterion) {
    let mut group = c.benchmark_group("rq2");
    group.sample_size(10);
    let bench = Benchmark::from_records(vec![
        BenchmarkRecord {
            name: "D".into(),
            expr: "a && (!b || !c) && d || e".into(),
        },
        BenchmarkRecord {
            name: "R10".into(),
            expr: random_sbe(&mut ChaCha8Rng::seed_from_u64(10), 10).to_string(),
        },
    ]);
    for (mode, jobs) in MODES {
        group.bench_function(BenchmarkId::new(mode, "100_trials"), |b| {
            b.iter(|| {
                par::with_jobs(jobs, || {
                    run_rq2(&bench, 100, 42, &VariantOptions::default()).unwrap()
                })
            })
        });
    }
    group.finish();
}

fn exhaustive_equivalence(c: &mut Criterion) {
    let mut group = c.benchmark_group("equivalent_exhaustive");
    group.sample_size(10);
    let e = random_sbe(&mut ChaCha8Rng::seed_from_u64(20), 20);
    let v = generate_variants(&e, &VariantOptions::with_max(2))
        .unwrap()
        .variants[1]
        .clone();
    for (mode, jobs) in MODES {
        group.bench_function(BenchmarkId::new(mode, "n20"), |b| {
            b.iter(|| {
                par::with_jobs(jobs, || {
                    equivalent(&e, &v, EquivalenceMode::Exhaustive).unwrap()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, family, resilience, exhaustive_equivalence);
criterion_main!(benches);

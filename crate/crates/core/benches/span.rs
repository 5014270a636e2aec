use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use umps_core::exact_algebra::RankMode;
use umps_core::span_character::{SpanEngine, SpanRequest};
use umps_core::{Exec, ResourceCaps};

const EXECS: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn character(c: &mut Criterion) {
    let mut g = c.benchmark_group("binary_character");
    g.sample_size(10);
    for d in [10, 12] {
        for (name, exec) in EXECS {
            g.bench_with_input(BenchmarkId::new(name, d), &d, |b, &d| {
                b.iter(|| {
                    SpanEngine::new(ResourceCaps::default(), exec)
                        .binary_character(d, RankMode::default())
                        .unwrap()
                })
            });
        }
    }
    g.finish();
}

fn weight_rank(c: &mut Criterion) {
    let mut g = c.benchmark_group("weight_rank");
    g.sample_size(10);
    for mode in [RankMode::default(), RankMode::Exact] {
        let label = if mode == RankMode::Exact { "exact" } else { "modular" };
        for (name, exec) in EXECS {
            let e = SpanEngine::new(ResourceCaps::default(), exec);
            e.span_dimension_weight(&SpanRequest::binary(12, 6)).unwrap();
            g.bench_function(BenchmarkId::new(format!("{label}/{name}"), "12,6"), |b| {
                b.iter(|| {
                    e.span_dimension_weight(&SpanRequest::binary(12, 6).with_mode(mode))
                        .unwrap()
                })
            });
        }
    }
    g.finish();
}

fn ideal(c: &mut Criterion) {
    let mut g = c.benchmark_group("ideal_k2");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_function(BenchmarkId::new(name, 8), |b| {
            b.iter(|| {
                SpanEngine::new(ResourceCaps::default(), exec)
                    .ideal_character(8, 2, RankMode::default())
                    .unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, character, weight_rank, ideal);
criterion_main!(benches);

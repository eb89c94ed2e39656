use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qfsplit_core::blowup::cusp_log_resolution;
use qfsplit_core::graph::DualGraph;
use qfsplit_core::ledger::{search_candidates, DelPezzoCase, DimLedger};
use qfsplit_core::witt::WittPolyCache;

fn bench_determinant(c: &mut Criterion) {
    let mut group = c.benchmark_group("chain-determinant");
    for n in [50usize, 200] {
        let graph = DualGraph::chain(&vec![-2; n]);
        let ids: Vec<String> = (1..=n).map(|i| format!("E{i}")).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            let refs: Vec<&str> = ids.iter().map(|s| s.as_str()).collect();
            b.iter(|| {
                graph
                    .intersection_matrix(&refs)
                    .unwrap()
                    .determinant()
            })
        });
    }
    group.finish();
}

fn bench_discrepancies(c: &mut Criterion) {
    let graph = cusp_log_resolution(30).unwrap();
    c.bench_function("cusp-discrepancies-n30", |b| {
        b.iter(|| graph.solve_discrepancies().unwrap())
    });
}

fn bench_witt_cache(c: &mut Criterion) {
    c.bench_function("witt-cache-p3-n4", |b| {
        b.iter(|| WittPolyCache::build(3, 4).unwrap())
    });
}

fn bench_ledger(c: &mut Criterion) {
    let case = DelPezzoCase::fixture("v").unwrap();
    c.bench_function("ledger-case-v-m6", |b| {
        b.iter(|| DimLedger::run(&case, 6).unwrap())
    });
}

fn bench_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("candidate-search");
    group.sample_size(10);
    group.bench_function("pmax11-mbound16", |b| {
        b.iter(|| search_candidates(11, 16))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_determinant,
    bench_discrepancies,
    bench_witt_cache,
    bench_ledger,
    bench_search
);
criterion_main!(benches);

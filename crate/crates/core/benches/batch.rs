//! Sequential versus rayon map over a batch of float <k,m>-core computations.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geninv::batch;
use geninv::classical::AlgorithmChoice;
use geninv::corpus::{self, Case};
use geninv::gencore::{self, ImCoreParams};
use geninv::{ApproxC, Tolerance};

fn work(case: &Case<ApproxC>) -> usize {
    let tol = Tolerance::default();
    let p = ImCoreParams::new(case.k.max(1), 2).expect("valid parameters");
    gencore::im_core(&case.a, p, &tol, AlgorithmChoice::RankChain)
        .map(|r| r.consistent as usize)
        .unwrap_or(0)
}

fn bench_batch(c: &mut Criterion) {
    let mut g = c.benchmark_group("im_core batch");
    for &size in &[16usize, 64] {
        let mut rng = corpus::rng(42);
        let cases: Vec<_> = (0..size).map(|_| corpus::float_case(&mut rng, 12, 4)).collect();
        g.bench_with_input(BenchmarkId::new("sequential", size), &cases, |b, cs| {
            b.iter(|| batch::seq_map(cs, work))
        });
        #[cfg(feature = "parallel")]
        g.bench_with_input(BenchmarkId::new("rayon", size), &cases, |b, cs| {
            b.iter(|| batch::par_map(cs, work))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_batch);
criterion_main!(benches);

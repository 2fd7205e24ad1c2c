//! Benchmarks the invariant battery under the data-parallel scheduler
//! against the sequential fallback, on identical deterministic
//! workloads.  Requires the `parallel` feature (the default), since the
//! point of the comparison is the rayon-backed path.
//!
//!     cargo bench -p volforms
//!
//! Three workload shapes are measured: the Cartan identity battery
//! (dominated by exact wedge/derivative arithmetic on bigints), the
//! bivector bracket battery (Leibniz identities over two coefficient
//! rings), and a raw `map_indexed` sweep of square decompositions.
//! Each is run through `par::map_indexed` (rayon work-stealing) and
//! `par::map_indexed_seq` (plain loop); with one worker thread the two
//! should coincide up to scheduler overhead, and the gap at higher
//! thread counts is the achievable speedup, since instances never share
//! state.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use volforms::cartan::{combinations, Form};
use volforms::decompose::square_decompose;
use volforms::par;
use volforms::scalar::{rat_int, PolyCoeff};
use volforms::suites::{run_suite, RunConfig};

/// Deterministic polynomial (n-3)-form used by the decomposition sweep.
fn sweep_form(n: usize, index: usize) -> Form<PolyCoeff> {
    let mut rng = ChaCha8Rng::seed_from_u64(index as u64);
    let combos = combinations(n, n - 3);
    let mut form = Form::zero(n, (n - 3) as i32);
    for _ in 0..2 {
        let combo = &combos[rng.gen_range(0..combos.len())];
        let axis = rng.gen_range(0..n);
        let deg = rng.gen_range(0..3u16);
        let mut exps = vec![0u16; n];
        exps[axis] = deg;
        let coeff = PolyCoeff::monomial(n, exps, rat_int(rng.gen_range(1..4i64)));
        form = form.add(&Form::term(n, combo.clone(), coeff));
    }
    form
}

fn run_config(instances: usize) -> RunConfig {
    RunConfig {
        seed: 1,
        dims: vec![3, 4],
        deg_cap: 2,
        freq_cap: 1,
        instances: Some(instances),
    }
}

fn bench_suites(c: &mut Criterion) {
    for suite in ["cartan", "leibniz"] {
        let mut group = c.benchmark_group(format!("{suite}-suite"));
        group.sample_size(10);
        let cfg = run_config(24);
        group.bench_with_input(BenchmarkId::new("parallel", 24), &cfg, |b, cfg| {
            b.iter(|| {
                let report = run_suite(suite, cfg).expect("known suite");
                assert!(report.passed());
                report.instances
            })
        });
        group.bench_with_input(BenchmarkId::new("sequential", 24), &cfg, |b, cfg| {
            b.iter(|| {
                // The suites schedule through par::map_indexed; pinning the
                // pool to one thread exercises the same code on one lane,
                // which matches the sequential fallback build.
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(1)
                    .build()
                    .expect("one-thread pool");
                pool.install(|| {
                    let report = run_suite(suite, cfg).expect("known suite");
                    assert!(report.passed());
                    report.instances
                })
            })
        });
        group.finish();
    }
}

fn bench_map_indexed(c: &mut Criterion) {
    let mut group = c.benchmark_group("square-decomposition-sweep");
    group.sample_size(10);
    let n = 4usize;
    let count = 48usize;
    // Both schedulers must produce the same witnesses in the same order.
    let par_targets = par::map_indexed(count, |i| sweep_form(n, i));
    let seq_targets = par::map_indexed_seq(count, |i| sweep_form(n, i));
    assert_eq!(par_targets, seq_targets);
    group.bench_function(BenchmarkId::new("parallel", count), |b| {
        b.iter(|| {
            let witnesses = par::map_indexed(count, |i| {
                square_decompose(&sweep_form(n, i)).expect("decomposable")
            });
            witnesses.len()
        })
    });
    group.bench_function(BenchmarkId::new("sequential", count), |b| {
        b.iter(|| {
            let witnesses = par::map_indexed_seq(count, |i| {
                square_decompose(&sweep_form(n, i)).expect("decomposable")
            });
            witnesses.len()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_suites, bench_map_indexed);
criterion_main!(benches);

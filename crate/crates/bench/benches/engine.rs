use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use rankin_bench::{delta_pair, quartic_mod_five};
use rankin_core::analytic::{mellin_phi_hat, residue_extract, SmoothingKernel, TaylorJet};
use rankin_core::arith::{ramanujan_tau, sieve_primes};
use rankin_core::prime_counting::{short_interval_sum, sw_experiment};
use rankin_core::rankin_selberg::{auxiliary_product, rs_stream};
use rankin_core::Complex64;

fn arith(c: &mut Criterion) {
    let mut g = c.benchmark_group("arith");
    for n in [10_000u64, 100_000] {
        g.bench_with_input(BenchmarkId::new("tau", n), &n, |b, &n| b.iter(|| ramanujan_tau(n).unwrap()));
    }
    g.bench_function("sieve/1e7", |b| b.iter(|| sieve_primes(black_box(10_000_000)).unwrap()));
    g.finish();
}

fn streams(c: &mut Criterion) {
    let pair = delta_pair(1_000_000);
    let d = pair.left().clone();
    let chi = quartic_mod_five();
    let mut g = c.benchmark_group("streams");
    g.sample_size(10);
    for n in [10_000usize, 100_000] {
        g.bench_with_input(BenchmarkId::new("delta_x_delta", n), &n, |b, &n| b.iter(|| rs_stream(&pair, n).unwrap()));
    }
    g.bench_function("auxiliary/1e4", |b| b.iter(|| auxiliary_product(&d, &d, &chi, 10_000).unwrap()));
    g.finish();
}

fn prime_sums(c: &mut Criterion) {
    let pair = delta_pair(1_000_000);
    let mut g = c.benchmark_group("prime_sums");
    g.sample_size(10);
    g.bench_function("sw/q3/1e6", |b| b.iter(|| sw_experiment(&pair, &[1e4, 1e5, 1e6], 3, 2.0).unwrap()));
    g.bench_function("short_interval/1e5", |b| {
        b.iter(|| short_interval_sum(&pair, 1e5, 1e5f64.powf(1.0 / 64.0)).unwrap())
    });
    g.finish();
}

fn analytic(c: &mut Criterion) {
    let kernel = SmoothingKernel::new(1e4, 2.5e3).unwrap();
    let s = Complex64::new(1.5, 7.0);
    c.bench_function("phi_hat", |b| b.iter(|| mellin_phi_hat(black_box(s), &kernel).unwrap()));

    let base = Complex64::new(0.3, -0.2);
    let jet = |k: usize| {
        let cs = (0..=2 * k + 2).map(|l| Complex64::new(1.0 / (l + 1) as f64, 0.5)).collect();
        TaylorJet::new(base, cs).unwrap()
    };
    let (f, g, h) = (jet(2), jet(2), jet(2));
    c.bench_function("residue/k2", |b| b.iter(|| residue_extract(&f, &g, &h, 2).unwrap()));
}

criterion_group!(benches, arith, streams, prime_sums, analytic);
criterion_main!(benches);

use num_complex::Complex64;
use proptest::prelude::*;

use super::stream::local_series;
use super::*;
use crate::arith::{gcd, ramanujan_tau, sieve_primes};
use crate::automorphic::{read_satake_table, AutomorphicRep};
use crate::characters::{characters_mod, DirichletCharacter};

const TOL: f64 = 1e-9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn delta(limit: u64) -> AutomorphicRep {
    AutomorphicRep::delta(limit).unwrap()
}

fn chi5() -> DirichletCharacter {
    characters_mod(5)
        .unwrap()
        .into_iter()
        .find(|c| (c.evaluate(2) - Complex64::new(0.0, 1.0)).norm() < 1e-12)
        .unwrap()
}

/// `lambda_Delta(p)` straight from the integer tau table.
fn tau_normalized(p: u64) -> f64 {
    let t = ramanujan_tau(p).unwrap();
    t.normalized(p)
}

/// Complete homogeneous polynomial by enumerating nondecreasing index tuples.
fn h_brute(params: &[Complex64], k: usize, start: usize) -> Complex64 {
    if k == 0 {
        return c(1.0);
    }
    (start..params.len()).map(|i| params[i] * h_brute(params, k - 1, i)).sum()
}

#[test]
fn zeta_pair() {
    let one = AutomorphicRep::trivial();
    let pair = RSPair::new(one.clone(), one);
    assert!(pair.is_zeta());
    let s = rs_stream(&pair, 100).unwrap();
    for n in 1..=100 {
        assert_eq!(s.lambda(n), c(1.0));
    }
    assert!((s.biglambda(8) - c(2f64.ln())).norm() < 1e-15);
    assert_eq!(s.biglambda(12), c(0.0));
    assert_eq!(s.biglambda(1), c(0.0));
}

#[test]
fn zeta_fast_path_matches_general_path() {
    // the principal character mod 1 routed through a generic degree-1 table
    let table = read_satake_table(&format!(
        "degree 1\nconductor 1\n{}",
        sieve_primes(500).unwrap().iter().map(|p| format!("{p} 1\n")).collect::<String>()
    ))
    .unwrap();
    let generic = AutomorphicRep::generic(table);
    let slow = rs_stream(&RSPair::new(generic, AutomorphicRep::trivial()), 500).unwrap();
    let one = AutomorphicRep::trivial();
    let fast = rs_stream(&RSPair::new(one.clone(), one), 500).unwrap();
    for n in 1..=500 {
        assert!((slow.lambda(n) - fast.lambda(n)).norm() < 1e-12);
        assert!((slow.biglambda(n) - fast.biglambda(n)).norm() < 1e-12);
    }
}

#[test]
fn delta_delta_at_primes() {
    let d = delta(1000);
    let s = rs_stream(&RSPair::new(d.clone(), d), 1000).unwrap();
    for p in sieve_primes(1000).unwrap() {
        let l = tau_normalized(p);
        let p = p as usize;
        assert!((s.lambda(p) - c(l * l)).norm() < TOL, "p = {p}");
        assert!((s.biglambda(p) - c(l * l * (p as f64).ln())).norm() < TOL);
    }
    assert_eq!(s.lambda(1), c(1.0));
}

#[test]
fn prime_power_coefficients_match_brute_force() {
    let d = delta(100);
    let pair = RSPair::new(d.clone(), d.twist(&chi5(), 0.7));
    let s = rs_stream(&pair, 3000).unwrap();
    for p in [2u64, 3, 7] {
        let params = pair.combined_parameters(p).unwrap();
        let mut pk = 1usize;
        for k in 1.. {
            pk *= p as usize;
            if pk > 3000 {
                break;
            }
            let want = h_brute(&params, k, 0);
            assert!((s.lambda(pk) - want).norm() < TOL, "{p}^{k}");
            let ps: Complex64 = params.iter().map(|a| a.powu(k as u32)).sum();
            assert!((s.biglambda(pk) - ps * (p as f64).ln()).norm() < TOL);
        }
    }
}

#[test]
fn ramified_twist_vanishes() {
    let d = delta(200);
    let pair = RSPair::new(d, AutomorphicRep::character(chi5()));
    let s = rs_stream(&pair, 200).unwrap();
    for pk in [5usize, 25, 125] {
        assert_eq!(s.lambda(pk), c(0.0));
        assert_eq!(s.biglambda(pk), c(0.0));
    }
    assert!(pair.ramified_primes().contains(&5));
}

#[test]
fn stream_is_multiplicative_and_supported_on_prime_powers() {
    let d = delta(2000);
    let s = rs_stream(&RSPair::new(d.clone(), d.twist(&chi5(), 0.0)), 2000).unwrap();
    let table = crate::arith::FactorTable::new(2000);
    for m in 2..=44usize {
        for n in 2..=(2000 / m) {
            if gcd(m as u64, n as u64) == 1 {
                assert!((s.lambda(m * n) - s.lambda(m) * s.lambda(n)).norm() < TOL);
            }
        }
    }
    for n in 2..=2000 {
        if table.prime_power(n).is_none() {
            assert_eq!(s.biglambda(n), c(0.0));
        }
    }
}

#[test]
fn twisted_pair_examples() {
    let d = delta(1000);
    let pair = RSPair::new(d.clone(), d.clone());
    let principal = DirichletCharacter::principal(1).unwrap();
    let same = twisted_pair(&pair, &principal, 0.0);
    assert_eq!(rs_stream(&same, 500).unwrap(), rs_stream(&pair, 500).unwrap());

    let chi = chi5();
    let tw = rs_stream(&twisted_pair(&pair, &chi, 0.0), 1000).unwrap();
    for p in sieve_primes(1000).unwrap() {
        if p == 5 {
            continue;
        }
        let l = tau_normalized(p);
        let want = c(l * l * (p as f64).ln()) * chi.evaluate(p as i64);
        assert!((tw.biglambda(p as usize) - want).norm() < TOL);
    }

    let base = rs_stream(&pair, 1000).unwrap();
    let shifted = rs_stream(&twisted_pair(&pair, &principal, 3.3), 1000).unwrap();
    for p in sieve_primes(1000).unwrap() {
        let p = p as usize;
        assert!((shifted.biglambda(p).norm() - base.biglambda(p).norm()).abs() < TOL);
    }
}

#[test]
fn auxiliary_factor_list() {
    let d = delta(100);
    let aux = auxiliary_product(&d, &d, &chi5(), 100).unwrap();
    assert_eq!(aux.factors().len(), 12);
    assert_eq!(aux.factor_count(), 16);
    let s = aux.stream();
    assert_eq!(s.lambda(1), c(1.0));
    for p in sieve_primes(100).unwrap() {
        let want: Complex64 = aux
            .factors()
            .iter()
            .map(|f| f.stream.biglambda(p as usize) * f.multiplicity as f64)
            .sum();
        assert!((s.biglambda(p as usize) - want).norm() < 1e-12);
    }
}

#[test]
fn auxiliary_routes_agree_and_are_nonnegative() {
    let d = delta(2000);
    for chi in [chi5(), DirichletCharacter::from_index(8, 1).unwrap(), DirichletCharacter::from_index(8, 2).unwrap()] {
        let aux = auxiliary_product(&d, &d, &chi, 2000).unwrap();
        let conv = aux.stream();
        let direct = aux.direct_stream().unwrap();
        for n in 1..=2000 {
            let (a, b) = (conv.lambda(n), direct.lambda(n));
            assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0), "{chi} n = {n}: {a} vs {b}");
            assert!((conv.biglambda(n) - direct.biglambda(n)).norm() <= 1e-12 * conv.biglambda(n).norm().max(1.0));
            assert!(a.re >= -TOL && a.im.abs() <= 1e-9 * a.norm().max(1.0));
            assert!(conv.biglambda(n).re >= -TOL);
        }
    }
}

#[test]
fn conductor_q_examples() {
    let one = AutomorphicRep::trivial();
    let principal = DirichletCharacter::principal(1).unwrap();
    assert!((conductor_q(&one, &one, &principal).unwrap() - 531441.0).abs() < 1e-6);

    let d = delta(10);
    let q = conductor_q(&d, &d, &chi5()).unwrap();
    let want = (80.75f64 * 80.75).powi(8) * 20f64.powi(16);
    assert!(((q - want) / want).abs() < 1e-12);

    // Q grows with C(chi) = q (parity + 3)
    let mut by_conductor: Vec<(f64, f64)> = [3u64, 4, 5, 7, 8, 11, 101]
        .iter()
        .flat_map(|&m| crate::characters::primitive_characters_mod(m).unwrap())
        .map(|chi| {
            let c = AutomorphicRep::character(chi.clone()).analytic_conductor(0.0).unwrap();
            (c, conductor_q(&one, &one, &chi).unwrap())
        })
        .collect();
    by_conductor.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in by_conductor.windows(2) {
        assert!(w[0].0 == w[1].0 || w[0].1 < w[1].1);
    }
}

#[test]
fn decoupling_examples() {
    let d = delta(10_000);
    let chi = chi5();
    let self_pair = RSPair::new(d.clone(), d.contragredient());
    let report = check_decoupling(&self_pair, 1000, TOL).unwrap();
    assert!(report.passed());
    assert!(report.worst_margin.abs() < 1e-9, "equality expected, margin {}", report.worst_margin);

    let report = check_decoupling(&RSPair::new(d.clone(), AutomorphicRep::character(chi)), 10_000, TOL).unwrap();
    assert!(report.passed(), "{:?}", &report.violations[..report.violations.len().min(5)]);

    let s = rs_stream(&RSPair::new(d.clone(), d), 100).unwrap();
    assert_eq!(s.biglambda(6), c(0.0));
}

#[test]
fn local_bounds_for_builtins() {
    let d = delta(5000);
    let chi = chi5();
    let pairs = [
        RSPair::new(d.clone(), d.clone()),
        RSPair::new(d.clone(), d.twist(&chi, 1.5)),
        RSPair::new(d.clone(), AutomorphicRep::character(chi)),
    ];
    for pair in &pairs {
        let r = check_local_bounds(pair, 5000, 1e-12).unwrap();
        assert!(r.passed(), "{pair}");
        assert!(r.worst_ramanujan_ratio <= 1.0 + 1e-12);
    }
    let bad = read_satake_table("degree 1\nconductor 1\narchimedean 0\n2 3\n3 1\n").unwrap();
    let r = check_local_bounds(&RSPair::new(AutomorphicRep::generic(bad), AutomorphicRep::trivial()), 3, 1e-9).unwrap();
    assert!(!r.passed());
    assert_eq!(r.jacquet_shalika_violations, vec![(2, 3.0)]);
}

#[test]
fn log_derivative_identity() {
    let d = delta(3000);
    for pair in [
        RSPair::new(d.clone(), d.clone()),
        RSPair::new(d.clone(), d.twist(&chi5(), -0.4)),
        RSPair::new(AutomorphicRep::trivial(), AutomorphicRep::trivial()),
    ] {
        let r = check_log_derivative(&rs_stream(&pair, 3000).unwrap());
        assert!(r.max_abs_error < 1e-9, "{pair}: {} at {}", r.max_abs_error, r.worst_n);
    }
}

#[test]
fn sparse_terms_match_dense_stream() {
    let d = delta(5000);
    let pair = RSPair::new(d.clone(), d.twist(&chi5(), 0.2));
    let dense = rs_stream(&pair, 5000).unwrap();
    let sparse = rs_biglambda_terms(&pair, 5000).unwrap();
    let mut count = 0;
    for n in 2..=5000usize {
        let v = dense.biglambda(n);
        if let Ok(i) = sparse.binary_search_by_key(&(n as u64), |t| t.0) {
            assert_eq!(sparse[i].1, v);
            count += 1;
        } else {
            assert_eq!(v, c(0.0));
        }
    }
    assert_eq!(count, sparse.len());
    assert!(rs_biglambda_terms(&pair, 1).unwrap().is_empty());
}

#[test]
fn insufficient_data_is_reported() {
    let d = AutomorphicRep::newform(crate::automorphic::delta_table(10).unwrap());
    let limit = match d.kind() {
        crate::automorphic::RepKind::Newform(t) => t.limit,
        _ => unreachable!(),
    };
    let err = rs_stream(&RSPair::new(d.clone(), d), (limit * 100) as usize).unwrap_err();
    assert!(matches!(err, crate::Error::InsufficientData { .. }));
}

#[test]
fn euler_product_matches_series() {
    let d = delta(20_000);
    let pair = RSPair::new(d.clone(), d);
    let s = rs_stream(&pair, 20_000).unwrap();
    let z = Complex64::new(3.0, 0.0);
    let series: Complex64 = (1..=20_000).map(|n| s.lambda(n) * (n as f64).powf(-3.0)).sum();
    let product = euler_product_eval(&pair, z, 20_000).unwrap();
    // both truncations differ by O(X^{-2}) with a small constant
    assert!((series - product).norm() < 1e-7, "{series} vs {product}");
}

#[test]
fn csv_export_layout() {
    let one = AutomorphicRep::trivial();
    let s = rs_stream(&RSPair::new(one.clone(), one), 10).unwrap();
    let mut buf = Vec::new();
    s.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# pair: trivial x trivial");
    assert_eq!(lines[1], "n,re_lambda,im_lambda,re_biglambda,im_biglambda");
    assert_eq!(lines.len(), 12);
    assert!(lines[9].starts_with("8,1,0,0.693147180559945"));
}

#[test]
fn pair_conductors() {
    let d = delta(10);
    let chi = chi5();
    let pair = RSPair::new(d.clone(), AutomorphicRep::character(chi));
    // N^{n'} N'^{n} = 1 * 5^2
    assert_eq!(pair.conductor(), 25.0);
    let mu = pair.archimedean().unwrap();
    assert_eq!(mu, vec![c(6.5), c(7.5)]);
    assert!((pair.analytic_conductor(0.0).unwrap() - 25.0 * 9.5 * 10.5).abs() < 1e-9);
}

#[test]
fn stream_is_thread_count_independent() {
    let d = delta(5000);
    let pair = RSPair::new(d.clone(), d.twist(&chi5(), 0.9));
    let a = rs_stream(&pair, 5000).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let b = pool.install(|| rs_stream(&pair, 5000).unwrap());
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn local_series_matches_brute_force(
        raw in proptest::collection::vec((-1.5f64..1.5, -1.5f64..1.5), 1..5),
        k in 1usize..5,
    ) {
        let params: Vec<Complex64> = raw.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let (h, s) = local_series(&params, k);
        let want = h_brute(&params, k, 0);
        prop_assert!((h[k] - want).norm() < 1e-9);
        let ps: Complex64 = params.iter().map(|a| a.powu(k as u32)).sum();
        prop_assert!((s[k] - ps).norm() < 1e-9);
    }
}

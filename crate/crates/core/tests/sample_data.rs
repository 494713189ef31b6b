use std::path::PathBuf;

use rankin_core::arith::ramanujan_tau;
use rankin_core::automorphic::{parse_rep, read_satake_table, AutomorphicRep};
use rankin_core::rankin_selberg::{rs_stream, RSPair};
use rankin_core::Error;

fn sample_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/delta_1e4.txt")
}

#[test]
fn sample_covers_all_primes_to_ten_thousand() {
    let table = read_satake_table(&std::fs::read_to_string(sample_path()).unwrap()).unwrap();
    assert_eq!(table.degree, 2);
    assert_eq!(table.conductor, 1);
    assert_eq!(table.primes.len(), 1229);
    assert_eq!(table.limit, 9973);
}

#[test]
fn sample_traces_are_normalized_tau() {
    let table = read_satake_table(&std::fs::read_to_string(sample_path()).unwrap()).unwrap();
    let tau = ramanujan_tau(10_000).unwrap();
    for &p in &table.primes {
        let a = table.parameters(p).unwrap();
        let trace = (a[0] + a[1]).re;
        let expected: f64 = tau.get(p).to_string().parse::<f64>().unwrap() / (p as f64).powf(5.5);
        assert!((trace - expected).abs() < 1e-13, "p = {p}: {trace} vs {expected}");
        assert!(((a[0] * a[1]).re - 1.0).abs() < 1e-13);
    }
}

#[test]
fn sample_reproduces_builtin_rankin_selberg_stream() {
    let file = parse_rep(sample_path().to_str().unwrap(), 0).unwrap();
    let d = AutomorphicRep::delta(10_000).unwrap();
    let from_file = rs_stream(&RSPair::new(file.clone(), file), 10_000).unwrap();
    let builtin = rs_stream(&RSPair::new(d.clone(), d), 10_000).unwrap();
    for n in 1..=10_000 {
        assert!((from_file.lambda(n) - builtin.lambda(n)).norm() < 1e-9 * builtin.lambda(n).norm().max(1.0));
        assert!((from_file.biglambda(n) - builtin.biglambda(n)).norm() < 1e-9);
    }
}

#[test]
fn sample_refuses_to_extrapolate() {
    let file = parse_rep(sample_path().to_str().unwrap(), 0).unwrap();
    let err = rs_stream(&RSPair::new(file.clone(), file), 10_010).unwrap_err();
    assert!(matches!(err, Error::InsufficientData { prime: 10007, .. }), "{err}");
}

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::stream::{rs_stream, CoefficientStream};
use super::RSPair;
use crate::arith::{sieve_primes, FactorTable};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecouplingViolation {
    pub n: usize,
    /// `"lambda"` or `"biglambda"`.
    pub coefficient: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecouplingReport {
    pub pair: String,
    pub limit: usize,
    pub tol: f64,
    pub violations: Vec<DecouplingViolation>,
    /// `min_n (rhs - lhs)` over both inequalities; negative means violated.
    pub worst_margin: f64,
}

impl DecouplingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `|c_{pi x pi'}(n)| <= sqrt(c_{pi x pi~}(n) c_{pi' x pi'~}(n)) + tol`
/// for `c = lambda` and `c = Lambda`, every `n <= limit`.
pub fn check_decoupling(pair: &RSPair, limit: usize, tol: f64) -> Result<DecouplingReport> {
    let main = rs_stream(pair, limit)?;
    let left = rs_stream(&RSPair::new(pair.left().clone(), pair.left().contragredient()), limit)?;
    let right = rs_stream(&RSPair::new(pair.right().clone(), pair.right().contragredient()), limit)?;
    Ok(decoupling_from_streams(&main, &left, &right, tol))
}

pub(crate) fn decoupling_from_streams(
    main: &CoefficientStream,
    left: &CoefficientStream,
    right: &CoefficientStream,
    tol: f64,
) -> DecouplingReport {
    let limit = main.limit();
    let mut violations = Vec::new();
    let mut worst = f64::INFINITY;
    for n in 1..=limit {
        let checks = [
            ("lambda", main.lambda(n), left.lambda(n), right.lambda(n)),
            ("biglambda", main.biglambda(n), left.biglambda(n), right.biglambda(n)),
        ];
        for (coefficient, m, l, r) in checks {
            // the diagonal coefficients are real and nonnegative up to rounding
            let rhs = (l.re.max(0.0) * r.re.max(0.0)).sqrt();
            let lhs = m.norm();
            worst = worst.min(rhs - lhs);
            if lhs > rhs + tol {
                violations.push(DecouplingViolation { n, coefficient, lhs, rhs });
            }
        }
    }
    DecouplingReport {
        pair: main.label().to_string(),
        limit,
        tol,
        violations,
        worst_margin: worst,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalBoundReport {
    pub pair: String,
    pub primes_checked: usize,
    pub parameters_checked: usize,
    /// `(p, |a|)` with `|a| > p`.
    pub jacquet_shalika_violations: Vec<(u64, f64)>,
    /// `(p, |a|)` with `|a| > p^{theta}`.
    pub ramanujan_violations: Vec<(u64, f64)>,
    /// `max |a| / p`.
    pub worst_js_ratio: f64,
    /// `max |a| / p^{theta}`.
    pub worst_ramanujan_ratio: f64,
}

impl LocalBoundReport {
    pub fn passed(&self) -> bool {
        self.jacquet_shalika_violations.is_empty() && self.ramanujan_violations.is_empty()
    }
}

/// Checks `|a| <= p` and `|a| <= p^{theta_n + theta_n'}` (each up to a
/// relative `tol`) for every combined parameter at every prime `<= limit`.
pub fn check_local_bounds(pair: &RSPair, limit: u64, tol: f64) -> Result<LocalBoundReport> {
    let theta = pair.theta_bound();
    let primes = sieve_primes(limit)?;
    let per_prime: Vec<(u64, Vec<Complex64>)> = primes
        .par_iter()
        .map(|&p| Ok((p, pair.combined_parameters(p)?)))
        .collect::<Result<_>>()?;
    let mut report = LocalBoundReport {
        pair: pair.to_string(),
        primes_checked: per_prime.len(),
        parameters_checked: 0,
        jacquet_shalika_violations: Vec::new(),
        ramanujan_violations: Vec::new(),
        worst_js_ratio: 0.0,
        worst_ramanujan_ratio: 0.0,
    };
    for (p, params) in per_prime {
        let pf = p as f64;
        let grc = pf.powf(theta);
        for a in params {
            let r = a.norm();
            report.parameters_checked += 1;
            report.worst_js_ratio = report.worst_js_ratio.max(r / pf);
            report.worst_ramanujan_ratio = report.worst_ramanujan_ratio.max(r / grc);
            if r > pf * (1.0 + tol) {
                report.jacquet_shalika_violations.push((p, r));
            }
            if r > grc * (1.0 + tol) {
                report.ramanujan_violations.push((p, r));
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct LogDerivativeReport {
    pub limit: usize,
    /// `max_n |lambda(n) log n - sum_{d | n} Lambda(d) lambda(n/d)|`.
    pub max_abs_error: f64,
    pub worst_n: usize,
}

/// The identity `lambda(n) log n = sum_{d | n} Lambda(d) lambda(n/d)`,
/// the coefficientwise form of `-L' = (-L'/L) L`.
pub fn check_log_derivative(stream: &CoefficientStream) -> LogDerivativeReport {
    let limit = stream.limit();
    let table = FactorTable::new(limit);
    let mut rhs = vec![Complex64::new(0.0, 0.0); limit + 1];
    for d in 2..=limit {
        if table.prime_power(d).is_none() {
            continue;
        }
        let b = stream.biglambda(d);
        for m in 1..=limit / d {
            rhs[d * m] += b * stream.lambda(m);
        }
    }
    let mut report = LogDerivativeReport {
        limit,
        max_abs_error: 0.0,
        worst_n: 1,
    };
    for (n, r) in rhs.iter().enumerate().skip(1) {
        let err = (stream.lambda(n) * (n as f64).ln() - r).norm();
        if err > report.max_abs_error {
            report.max_abs_error = err;
            report.worst_n = n;
        }
    }
    report
}

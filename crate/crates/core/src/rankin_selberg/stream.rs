use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use super::dd::DdComplex;
use super::RSPair;
use crate::arith::{is_prime, sieve_primes, FactorTable};
use crate::error::{Error, Result};

/// `lambda(n)` and `Lambda(n)` for `1 <= n <= limit`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientStream {
    label: String,
    /// Index `n`; slot 0 is unused and zero.
    lambda: Vec<Complex64>,
    biglambda: Vec<Complex64>,
}

impl CoefficientStream {
    /// Builds a stream from 1-indexed arrays (slot 0 ignored).
    pub fn from_parts(label: impl Into<String>, lambda: Vec<Complex64>, biglambda: Vec<Complex64>) -> Result<Self> {
        if lambda.len() != biglambda.len() || lambda.len() < 2 {
            return Err(Error::Domain("stream arrays must share a length of at least 2".into()));
        }
        Ok(CoefficientStream {
            label: label.into(),
            lambda,
            biglambda,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn limit(&self) -> usize {
        self.lambda.len() - 1
    }

    pub fn lambda(&self, n: usize) -> Complex64 {
        self.lambda[n]
    }

    pub fn biglambda(&self, n: usize) -> Complex64 {
        self.biglambda[n]
    }

    /// `lambda(0..=limit)`, with `lambda(0) = 0`.
    pub fn lambdas(&self) -> &[Complex64] {
        &self.lambda
    }

    /// `Lambda(0..=limit)`, with `Lambda(0) = 0`.
    pub fn biglambdas(&self) -> &[Complex64] {
        &self.biglambda
    }

    /// The first `limit` terms.
    pub fn truncated(&self, limit: usize) -> Result<Self> {
        if limit > self.limit() || limit < 1 {
            return Err(Error::InsufficientLimit(format!(
                "cannot truncate a stream of length {} to {limit}",
                self.limit()
            )));
        }
        Ok(CoefficientStream {
            label: self.label.clone(),
            lambda: self.lambda[..=limit].to_vec(),
            biglambda: self.biglambda[..=limit].to_vec(),
        })
    }

    /// CSV export: a `# pair: ...` line, a header, then one row per `n`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# pair: {}", self.label)?;
        writeln!(out, "n,re_lambda,im_lambda,re_biglambda,im_biglambda")?;
        for n in 1..=self.limit() {
            let (l, b) = (self.lambda[n], self.biglambda[n]);
            writeln!(out, "{n},{},{},{},{}", l.re, l.im, b.re, b.im)?;
        }
        Ok(())
    }
}

/// Local power series at one prime: `h_k` (complete homogeneous sums) and
/// `s_k` (power sums) of the parameters, for `k <= max_k`.
pub(crate) fn local_series(params: &[Complex64], max_k: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let (h, s) = local_series_dd(params, max_k);
    (h.iter().map(DdComplex::round).collect(), s.iter().map(DdComplex::round).collect())
}

/// [`local_series`] before the final rounding. With many parameters `h_k`
/// is a long cancelling sum, so the recursion runs in double-double.
fn local_series_dd(params: &[Complex64], max_k: usize) -> (Vec<DdComplex>, Vec<DdComplex>) {
    let mut h = vec![DdComplex::ZERO; max_k + 1];
    h[0] = DdComplex::ONE;
    let mut s = vec![DdComplex::ZERO; max_k + 1];
    for &a in params {
        // multiply by 1 / (1 - a T)
        for k in 1..=max_k {
            let prev = h[k - 1];
            h[k] = h[k].add(prev.mul_f64(a));
        }
        let mut pow = DdComplex::ONE;
        for sk in s.iter_mut().skip(1) {
            pow = pow.mul_f64(a);
            *sk = sk.add(pow);
        }
    }
    (h, s)
}

/// `lambda(0..=limit)` in double-double, for convolutions that must not
/// lose the exact multiplicative structure to rounding.
pub(crate) fn rs_lambda_dd(pair: &RSPair, limit: usize) -> Result<Vec<DdComplex>> {
    require_data(pair, limit as u64)?;
    let table = FactorTable::new(limit);
    let mut lambda = vec![DdComplex::ZERO; limit + 1];
    lambda[1] = DdComplex::ONE;
    let local: Vec<(u64, Vec<DdComplex>)> = table
        .primes()
        .par_iter()
        .map(|&p| {
            let p = p as u64;
            let params = pair.combined_parameters(p)?;
            Ok((p, local_series_dd(&params, max_exponent(p, limit as u64)).0))
        })
        .collect::<Result<_>>()?;
    for (p, h) in local {
        let mut pk = p as usize;
        for hk in h.into_iter().skip(1) {
            lambda[pk] = hk;
            pk = pk.saturating_mul(p as usize);
        }
    }
    for n in 2..=limit {
        let q = table.smallest_prime_power(n) as usize;
        if q != n {
            lambda[n] = lambda[q].mul(lambda[n / q]);
        }
    }
    Ok(lambda)
}

/// Dirichlet convolution in double-double.
pub(crate) fn dirichlet_convolve_dd(a: &[DdComplex], b: &[DdComplex]) -> Vec<DdComplex> {
    let limit = a.len().min(b.len()).saturating_sub(1);
    let mut out = vec![DdComplex::ZERO; limit + 1];
    for d in 1..=limit {
        let ad = a[d];
        if ad == DdComplex::ZERO {
            continue;
        }
        for m in 1..=limit / d {
            out[d * m] = out[d * m].add(ad.mul(b[m]));
        }
    }
    out
}

fn max_exponent(p: u64, limit: u64) -> usize {
    let mut k = 0;
    let mut pk = 1u64;
    while let Some(next) = pk.checked_mul(p).filter(|&v| v <= limit) {
        pk = next;
        k += 1;
    }
    k
}

fn require_data(pair: &RSPair, limit: u64) -> Result<()> {
    if limit < 2 {
        return Err(Error::EmptyDomain(format!("stream limit {limit} has no primes")));
    }
    let have = pair.data_limit();
    if have < limit {
        // tables end at their last prime, so only a prime in (have, limit] is missing
        if let Some(prime) = (have + 1..=limit).find(|&m| is_prime(m)) {
            return Err(Error::InsufficientData { prime, limit: have });
        }
    }
    Ok(())
}

/// `lambda` and `Lambda` of `L(s, pi x pi')` for `n <= limit`.
///
/// For each prime `p` the local series `prod_j (1 - a_j T)^{-1}` gives
/// `lambda(p^k)` and the power sums give `Lambda(p^k) = log p sum_j a_j^k`;
/// `lambda` is then extended multiplicatively with a smallest-prime-factor
/// table. Primes are processed in parallel and merged in order.
pub fn rs_stream(pair: &RSPair, limit: usize) -> Result<CoefficientStream> {
    require_data(pair, limit as u64)?;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let table = FactorTable::new(limit);
    let mut lambda = vec![zero; limit + 1];
    let mut biglambda = vec![zero; limit + 1];
    lambda[1] = one;

    if pair.is_zeta() {
        for n in 2..=limit {
            lambda[n] = one;
            if let Some((p, _)) = table.prime_power(n) {
                biglambda[n] = Complex64::new((p as f64).ln(), 0.0);
            }
        }
        return Ok(CoefficientStream {
            label: pair.to_string(),
            lambda,
            biglambda,
        });
    }

    let local: Vec<(u64, Vec<Complex64>, Vec<Complex64>)> = table
        .primes()
        .par_iter()
        .map(|&p| {
            let p = p as u64;
            let params = pair.combined_parameters(p)?;
            let (h, s) = local_series(&params, max_exponent(p, limit as u64));
            Ok((p, h, s))
        })
        .collect::<Result<_>>()?;

    for (p, h, s) in local {
        let log_p = (p as f64).ln();
        let mut pk = p as usize;
        for k in 1..h.len() {
            lambda[pk] = h[k];
            biglambda[pk] = s[k] * log_p;
            pk = pk.saturating_mul(p as usize);
        }
    }
    for n in 2..=limit {
        let q = table.smallest_prime_power(n) as usize;
        if q != n {
            lambda[n] = lambda[q] * lambda[n / q];
        }
    }
    Ok(CoefficientStream {
        label: pair.to_string(),
        lambda,
        biglambda,
    })
}

/// `(n, Lambda(n))` for every prime power `n <= x`, ascending. Needs no
/// dense arrays, so it reaches much larger `x` than [`rs_stream`].
pub fn rs_biglambda_terms(pair: &RSPair, x: u64) -> Result<Vec<(u64, Complex64)>> {
    if x < 2 {
        return Ok(Vec::new());
    }
    require_data(pair, x)?;
    let primes = sieve_primes(x)?;
    let zeta = pair.is_zeta();
    let per_prime: Vec<Vec<(u64, Complex64)>> = primes
        .par_iter()
        .map(|&p| {
            let k = max_exponent(p, x);
            let log_p = (p as f64).ln();
            let s = if zeta {
                vec![Complex64::new(1.0, 0.0); k + 1]
            } else {
                local_series(&pair.combined_parameters(p)?, k).1
            };
            let mut out = Vec::with_capacity(k);
            let mut pk = p;
            for sk in s.iter().skip(1) {
                out.push((pk, sk * log_p));
                pk = pk.saturating_mul(p);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut terms: Vec<(u64, Complex64)> = per_prime.into_iter().flatten().collect();
    terms.sort_unstable_by_key(|t| t.0);
    Ok(terms)
}

/// Dirichlet convolution `(a * b)(n) = sum_{dm = n} a(d) b(m)` of two
/// 1-indexed arrays, truncated to the shorter length.
pub fn dirichlet_convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let limit = a.len().min(b.len()).saturating_sub(1);
    let mut out = vec![Complex64::new(0.0, 0.0); limit + 1];
    for d in 1..=limit {
        let ad = a[d];
        if ad == Complex64::new(0.0, 0.0) {
            continue;
        }
        for m in 1..=limit / d {
            out[d * m] += ad * b[m];
        }
    }
    out
}

/// The truncated Euler product `prod_{p <= primes_up_to} prod_j (1 - a_j p^{-s})^{-1}`.
pub fn euler_product_eval(pair: &RSPair, s: Complex64, primes_up_to: u64) -> Result<Complex64> {
    require_data(pair, primes_up_to)?;
    let primes = sieve_primes(primes_up_to)?;
    let logs: Vec<Complex64> = primes
        .par_iter()
        .map(|&p| {
            let ps = Complex64::new(p as f64, 0.0).powc(-s);
            let params = pair.combined_parameters(p)?;
            Ok(params.iter().map(|a| -(Complex64::new(1.0, 0.0) - a * ps).ln()).sum())
        })
        .collect::<Result<_>>()?;
    // fixed-order summation keeps the result thread-count independent
    let total: Complex64 = logs.iter().sum();
    Ok(total.exp())
}

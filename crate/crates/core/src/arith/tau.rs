use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::factor::gcd;
use super::series::jacobi_cube_series;
use super::sieve::{sieve_primes, FactorTable};
use crate::error::{Error, Result};

/// Ramanujan's `tau(n)` for `1 <= n <= limit`, the coefficients of
/// `Delta = q prod (1 - q^n)^24`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauTable {
    values: Vec<BigInt>,
}

impl TauTable {
    pub fn limit(&self) -> u64 {
        self.values.len() as u64
    }

    /// `tau(n)`; panics outside `1..=limit`.
    pub fn get(&self, n: u64) -> &BigInt {
        assert!(n >= 1 && n <= self.limit(), "tau({n}) outside table 1..={}", self.limit());
        &self.values[(n - 1) as usize]
    }

    /// `tau(1..=limit)` in order.
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// `tau(p) / p^{11/2}`, the unitarily normalized Hecke eigenvalue.
    pub fn normalized(&self, p: u64) -> f64 {
        let t = self.get(p).to_f64().expect("tau fits in f64 range");
        t / (p as f64).powf(5.5)
    }
}

/// `tau(1..=limit)`.
///
/// `Delta / q = (prod (1 - q^n)^3)^8`, and the cube has Jacobi's sparse
/// closed form, so three exact squarings give the whole table.
pub fn ramanujan_tau(limit: u64) -> Result<TauTable> {
    if limit < 1 {
        return Err(Error::EmptyDomain("tau table needs limit >= 1".into()));
    }
    let order = (limit - 1) as usize;
    let eta8 = jacobi_cube_series(order).pow(8);
    Ok(TauTable {
        values: eta8.into_coefficients(),
    })
}

/// Outcome of the exact checks on a tau table.
#[derive(Debug, Clone, Default, Serialize)]
pub struct TauCheck {
    pub limit: u64,
    pub multiplicative_pairs: usize,
    pub hecke_relations: usize,
    pub deligne_primes: usize,
    pub failures: Vec<String>,
    /// `max |tau(p)| / (2 p^{11/2})` over primes in range.
    pub worst_deligne_ratio: f64,
}

impl TauCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Multiplicativity on every coprime pair, the Hecke recursion at every
/// prime power and Deligne's bound at every prime, all in exact integers.
pub fn check_tau(table: &TauTable) -> TauCheck {
    let limit = table.limit();
    let mut report = TauCheck {
        limit,
        ..Default::default()
    };
    if limit == 0 {
        return report;
    }
    if table.get(1) != &BigInt::from(1) {
        report.failures.push(format!("tau(1) = {}", table.get(1)));
    }

    for m in 2..=limit {
        for n in (m + 1)..=(limit / m) {
            if gcd(m, n) != 1 {
                continue;
            }
            report.multiplicative_pairs += 1;
            if table.get(m * n) != &(table.get(m) * table.get(n)) {
                report.failures.push(format!("tau({}) != tau({m}) tau({n})", m * n));
            }
        }
    }

    let primes = if limit >= 2 { sieve_primes(limit).unwrap_or_default() } else { Vec::new() };
    for &p in &primes {
        let p11 = BigInt::from(p).pow(11);
        let tp = table.get(p);
        // |tau(p)| <= 2 p^{11/2}  <=>  tau(p)^2 <= 4 p^11
        report.deligne_primes += 1;
        if tp * tp > &p11 * 4 {
            report.failures.push(format!("Deligne bound fails at p = {p}"));
        }
        let ratio = tp.abs().to_f64().unwrap_or(f64::INFINITY) / (2.0 * (p as f64).powf(5.5));
        report.worst_deligne_ratio = report.worst_deligne_ratio.max(ratio);

        let mut prev = BigInt::from(1);
        let mut cur = tp.clone();
        let mut pk = p;
        while let Some(next) = pk.checked_mul(p).filter(|&v| v <= limit) {
            let want = tp * &cur - &p11 * &prev;
            report.hecke_relations += 1;
            if table.get(next) != &want {
                report.failures.push(format!("Hecke recursion fails at {next}"));
            }
            prev = cur;
            cur = want;
            pk = next;
        }
    }
    report
}

/// Exact multiplicativity check of `tau` against its prime-power values,
/// driven by a smallest-prime-factor table. Cheaper than [`check_tau`] for
/// large tables since it touches each `n` once.
pub fn check_tau_factored(table: &TauTable) -> bool {
    let limit = table.limit() as usize;
    let ft = FactorTable::new(limit);
    (2..=limit).all(|n| {
        let pk = ft.smallest_prime_power(n) as usize;
        if pk == n {
            return true;
        }
        table.get(n as u64) == &(table.get(pk as u64) * table.get((n / pk) as u64))
    })
}

/// `sum_{d | n} d^k`, used in tests and the congruence sanity check.
pub fn divisor_power_sum(n: u64, k: u32) -> BigInt {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| BigInt::from(d).pow(k))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::series::{euler_product_series, IntegerSeries};
    use num_integer::Integer;
    use num_traits::Zero;

    /// Naive oracle: multiply the truncated product out factor by factor,
    /// 24 times, in plain i128.
    fn naive_tau(limit: usize) -> Vec<i128> {
        let order = limit - 1;
        let mut c = vec![0i128; order + 1];
        c[0] = 1;
        for _ in 0..24 {
            for n in 1..=order {
                for m in (n..=order).rev() {
                    c[m] -= c[m - n];
                }
            }
        }
        c
    }

    #[test]
    fn small_values() {
        let t = ramanujan_tau(12).unwrap();
        let want = [1i64, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944];
        for (n, &w) in want.iter().enumerate() {
            assert_eq!(t.get(n as u64 + 1), &BigInt::from(w));
        }
        assert_eq!(t.get(6), &(t.get(2) * t.get(3)));
        assert!(ramanujan_tau(0).is_err());
    }

    #[test]
    fn agrees_with_naive_expansion() {
        let limit = 300;
        let t = ramanujan_tau(limit as u64).unwrap();
        for (n, w) in naive_tau(limit).into_iter().enumerate() {
            assert_eq!(t.get(n as u64 + 1), &BigInt::from(w));
        }
    }

    #[test]
    fn euler_product_to_the_24th_reproduces_tau() {
        let limit = 3000u64;
        let e24 = euler_product_series((limit - 1) as usize).pow(24);
        let t = ramanujan_tau(limit).unwrap();
        assert_eq!(IntegerSeries::new(t.values().to_vec(), (limit - 1) as usize), e24);
    }

    #[test]
    fn ramanujan_congruence_mod_691() {
        let t = ramanujan_tau(200).unwrap();
        for n in 1..=200u64 {
            let diff = t.get(n) - divisor_power_sum(n, 11);
            assert!(diff.mod_floor(&BigInt::from(691)).is_zero(), "n = {n}");
        }
    }

    #[test]
    fn exact_relations_hold() {
        let t = ramanujan_tau(2000).unwrap();
        let report = check_tau(&t);
        assert!(report.passed(), "{:?}", report.failures);
        assert!(report.multiplicative_pairs > 1000);
        assert!(report.worst_deligne_ratio < 1.0);
        assert!(check_tau_factored(&t));
    }

    #[test]
    fn corrupted_table_is_caught() {
        let mut t = ramanujan_tau(100).unwrap();
        t.values[5] += 1; // tau(6)
        let report = check_tau(&t);
        assert!(!report.passed());
        assert!(!check_tau_factored(&t));
    }
}

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Sieve block length in bytes; one block fits comfortably in L1/L2.
const BLOCK: u64 = 1 << 15;

/// All primes `<= limit`, ascending.
///
/// Segmented sieve of Eratosthenes: the base primes up to `sqrt(limit)` are
/// found with a plain sieve, then `[sqrt(limit), limit]` is processed in
/// fixed-size blocks. Blocks are sieved in parallel and concatenated in
/// block order, so the output does not depend on the thread count.
pub fn sieve_primes(limit: u64) -> Result<Vec<u64>> {
    if limit < 2 {
        return Err(Error::EmptyDomain(format!(
            "no primes <= {limit}; sieve limit must be at least 2"
        )));
    }
    let root = integer_sqrt(limit);
    let base = simple_sieve(root);
    let start = root + 1;
    let blocks = (limit - start) / BLOCK + 1;
    let segments: Vec<Vec<u64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = start + b * BLOCK;
            let hi = (lo + BLOCK - 1).min(limit);
            sieve_block(lo, hi, &base)
        })
        .collect();

    let mut primes = base;
    let total: usize = segments.iter().map(Vec::len).sum();
    primes.reserve(total);
    for seg in segments {
        primes.extend(seg);
    }
    Ok(primes)
}

fn sieve_block(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p > hi {
            break;
        }
        let first = (lo.div_ceil(p) * p).max(p * p);
        let mut m = first;
        while m <= hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| lo + i as u64)
        .collect()
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// `floor(sqrt(n))`, exact for all `u64`.
pub fn integer_sqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Smallest-prime-factor table for `1..=limit` built by a linear sieve.
///
/// Besides the smallest prime factor, each entry records the full power of
/// that prime dividing `n`, which is what multiplicative extension needs.
#[derive(Debug, Clone)]
pub struct FactorTable {
    spf: Vec<u32>,
    spf_power: Vec<u32>,
    primes: Vec<u32>,
}

impl FactorTable {
    pub fn new(limit: usize) -> Self {
        assert!(limit < u32::MAX as usize, "factor table limit exceeds u32");
        let mut spf = vec![0u32; limit + 1];
        let mut spf_power = vec![0u32; limit + 1];
        let mut primes: Vec<u32> = Vec::new();
        if limit >= 1 {
            spf_power[1] = 1;
        }
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                spf_power[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                if p > si {
                    break;
                }
                let m = i * p as usize;
                if m > limit {
                    break;
                }
                spf[m] = p;
                spf_power[m] = if p == si { spf_power[i] * p } else { p };
            }
        }
        FactorTable {
            spf,
            spf_power,
            primes,
        }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Smallest prime factor of `n` (0 for `n = 1`).
    pub fn smallest_prime(&self, n: usize) -> u32 {
        self.spf[n]
    }

    /// Largest power of the smallest prime factor dividing `n` (1 for `n = 1`).
    pub fn smallest_prime_power(&self, n: usize) -> u32 {
        self.spf_power[n]
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// `Some((p, k))` when `n = p^k` with `k >= 1`.
    pub fn prime_power(&self, n: usize) -> Option<(u64, u32)> {
        if n < 2 || self.spf_power[n] as usize != n {
            return None;
        }
        let p = self.spf[n] as u64;
        let mut k = 0;
        let mut m = n as u64;
        while m > 1 {
            m /= p;
            k += 1;
        }
        Some((p, k))
    }
}

/// Every prime power `p^k <= limit` with `k >= 1`, sorted by value.
pub fn prime_powers(limit: u64) -> Result<Vec<(u64, u64, u32)>> {
    let primes = sieve_primes(limit)?;
    let mut out = Vec::with_capacity(primes.len() + primes.len() / 8);
    for &p in &primes {
        let mut pk = p;
        let mut k = 1;
        loop {
            out.push((pk, p, k));
            match pk.checked_mul(p) {
                Some(next) if next <= limit => {
                    pk = next;
                    k += 1;
                }
                _ => break,
            }
        }
    }
    out.sort_unstable_by_key(|t| t.0);
    Ok(out)
}

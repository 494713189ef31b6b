use std::fmt;

use crate::error::{Error, Result};

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredInteger {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// Euler's totient.
    pub fn totient(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// Möbius function.
    pub fn mobius(&self) -> i64 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let current = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..current {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Factor `n` by trial division (2, 3, then the 6k +- 1 wheel).
pub fn factorize(n: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let mut factors = Vec::new();
    let mut m = n;
    for p in [2u64, 3] {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    let mut d = 5u64;
    let mut step = 2;
    while d.checked_mul(d).is_some_and(|sq| sq <= m) {
        let mut e = 0;
        while m % d == 0 {
            m /= d;
            e += 1;
        }
        if e > 0 {
            factors.push((d, e));
        }
        d += step;
        step = 6 - step;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(FactoredInteger { value: n, factors })
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).map(|f| f.is_prime()).unwrap_or(false)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).map(|f| f.totient()).unwrap_or(0)
}

/// `base^exp mod m` with 128-bit intermediates.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Smallest primitive root modulo an odd prime `p`.
pub fn primitive_root_mod_prime(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let order = p - 1;
    let qs: Vec<u64> = factorize(order).expect("p > 2").primes().collect();
    (2..p)
        .find(|&g| qs.iter().all(|&q| mod_pow(g, order / q, p) != 1))
        .expect("every prime has a primitive root")
}

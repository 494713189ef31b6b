//! Multi-modular number-theoretic transform for exact integer convolution.
//!
//! Coefficients are reduced modulo up to five 31-bit NTT-friendly primes,
//! convolved in each residue ring and lifted back with Garner's algorithm.
//! The number of primes is chosen from an a-priori bound on the output
//! coefficients, so the lift is always exact.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

/// `(p, g)`: prime with `2^25 | p - 1` and a primitive root `g`.
pub(crate) const NTT_PRIMES: [(u64, u64); 5] = [
    (167_772_161, 3),
    (469_762_049, 3),
    (1_811_939_329, 13),
    (2_013_265_921, 31),
    (2_113_929_217, 5),
];

/// Longest supported transform (the smallest 2-adic valuation above is 25).
pub(crate) const MAX_LOG_LEN: u32 = 25;

fn pow_mod<const P: u64>(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

fn transform<const P: u64, const G: u64>(a: &mut [u64], invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w_len = pow_mod::<P>(G, (P - 1) / len as u64);
        if invert {
            w_len = pow_mod::<P>(w_len, P - 2);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut w = 1u64;
        for _ in 0..half {
            twiddles.push(w);
            w = w * w_len % P;
        }
        for chunk in a.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((u, v), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let x = *u;
                let y = *v * w % P;
                *u = if x + y >= P { x + y - P } else { x + y };
                *v = if x >= y { x - y } else { x + P - y };
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod::<P>(n as u64, P - 2);
        for x in a.iter_mut() {
            *x = *x * n_inv % P;
        }
    }
}

fn convolve<const P: u64, const G: u64>(a: &[u64], b: Option<&[u64]>, out_len: usize) -> Vec<u64> {
    let b_len = b.map_or(a.len(), <[u64]>::len);
    let full = a.len() + b_len - 1;
    let size = full.min(out_len).max(1);
    let n = full.next_power_of_two();
    let mut fa = vec![0u64; n];
    fa[..a.len()].copy_from_slice(a);
    transform::<P, G>(&mut fa, false);
    match b {
        None => {
            for x in fa.iter_mut() {
                *x = *x * *x % P;
            }
        }
        Some(b) => {
            let mut fb = vec![0u64; n];
            fb[..b.len()].copy_from_slice(b);
            transform::<P, G>(&mut fb, false);
            for (x, y) in fa.iter_mut().zip(&fb) {
                *x = *x * *y % P;
            }
        }
    }
    transform::<P, G>(&mut fa, true);
    fa.truncate(size);
    fa
}

fn convolve_with_prime(idx: usize, a: &[u64], b: Option<&[u64]>, out_len: usize) -> Vec<u64> {
    macro_rules! dispatch {
        ($($i:literal),*) => {
            match idx {
                $($i => convolve::<{ NTT_PRIMES[$i].0 }, { NTT_PRIMES[$i].1 }>(a, b, out_len),)*
                _ => unreachable!("only {} NTT primes", NTT_PRIMES.len()),
            }
        };
    }
    dispatch!(0, 1, 2, 3, 4)
}

/// Number of primes needed so that the product exceeds `2^(bits + 1)`,
/// or `None` if even all five are not enough.
pub(crate) fn primes_for_bits(bits: u64) -> Option<usize> {
    let mut acc = 0f64;
    for (i, &(p, _)) in NTT_PRIMES.iter().enumerate() {
        // floor(log2) keeps this conservative.
        acc += (p as f64).log2().floor();
        if acc >= (bits + 1) as f64 {
            return Some(i + 1);
        }
    }
    None
}

fn residue(c: &BigInt, p: u64) -> u64 {
    if let Some(v) = c.to_i64() {
        return v.rem_euclid(p as i64) as u64;
    }
    let (sign, digits) = c.to_u64_digits();
    let mut r: u128 = 0;
    for &d in digits.iter().rev() {
        r = ((r << 64) | d as u128) % p as u128;
    }
    let r = r as u64;
    if sign == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = (a % p) as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        e >>= 1;
    }
    acc as u64
}

/// Exact product of two integer polynomials, truncated to `out_len` terms.
///
/// `bound_bits` must bound `log2` of the largest output coefficient
/// magnitude. Returns `None` when the bound needs more primes than are
/// available or the transform would be too long.
pub(crate) fn multiply_exact(
    a: &[BigInt],
    b: Option<&[BigInt]>,
    out_len: usize,
    bound_bits: u64,
) -> Option<Vec<BigInt>> {
    let k = primes_for_bits(bound_bits)?;
    let b_len = b.map_or(a.len(), <[BigInt]>::len);
    let full = a.len() + b_len - 1;
    if full.next_power_of_two().trailing_zeros() > MAX_LOG_LEN {
        return None;
    }

    let residues: Vec<Vec<u64>> = (0..k)
        .into_par_iter()
        .map(|i| {
            let p = NTT_PRIMES[i].0;
            let ra: Vec<u64> = a.iter().map(|c| residue(c, p)).collect();
            let rb: Option<Vec<u64>> = b.map(|b| b.iter().map(|c| residue(c, p)).collect());
            convolve_with_prime(i, &ra, rb.as_deref(), out_len)
        })
        .collect();

    let len = residues[0].len();
    let primes: Vec<u64> = NTT_PRIMES[..k].iter().map(|&(p, _)| p).collect();
    // inv[i][j] = p_j^{-1} mod p_i for j < i
    let inv: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..i).map(|j| inv_mod(primes[j], primes[i])).collect())
        .collect();
    let modulus: BigInt = primes.iter().map(|&p| BigInt::from(p)).product();
    let half = &modulus >> 1;

    let out = (0..len)
        .into_par_iter()
        .map(|idx| {
            let mut digits = [0u64; 5];
            for i in 0..k {
                let p = primes[i];
                let mut t = residues[i][idx];
                for j in 0..i {
                    let vj = digits[j] % p;
                    t = if t >= vj { t - vj } else { t + p - vj };
                    t = (t as u128 * inv[i][j] as u128 % p as u128) as u64;
                }
                digits[i] = t;
            }
            if k <= 4 {
                let mut value: u128 = 0;
                let mut radix: u128 = 1;
                for i in 0..k {
                    value += digits[i] as u128 * radix;
                    radix *= primes[i] as u128;
                }
                let v = BigInt::from(value);
                if v > half {
                    v - &modulus
                } else {
                    v
                }
            } else {
                let mut value = BigInt::zero();
                let mut radix = BigInt::from(1u8);
                for i in 0..k {
                    value += &radix * digits[i];
                    radix *= primes[i];
                }
                if value > half {
                    value - &modulus
                } else {
                    value
                }
            }
        })
        .collect();
    Some(out)
}

/// `ceil(log2(|c| + 1))`, i.e. the bit length of `|c|`.
pub(crate) fn bit_length(c: &BigInt) -> u64 {
    c.abs().bits()
}

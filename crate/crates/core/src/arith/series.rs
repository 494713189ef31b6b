use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ntt;

/// Products with fewer coefficient multiplications than this stay on the
/// schoolbook path.
const SCHOOLBOOK_LIMIT: usize = 1 << 16;

/// Exact power series `sum c_m q^m` truncated at a declared order.
///
/// Holds exactly `order + 1` coefficients. Products truncate at the smaller
/// of the two orders and never below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSeries {
    coefficients: Vec<BigInt>,
}

impl IntegerSeries {
    /// Builds a series of the given order; missing coefficients are zero,
    /// extra ones are dropped.
    pub fn new(mut coefficients: Vec<BigInt>, order: usize) -> Self {
        coefficients.resize(order + 1, BigInt::zero());
        IntegerSeries { coefficients }
    }

    pub fn from_i64(coefficients: &[i64], order: usize) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![BigInt::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn coefficient(&self, m: usize) -> &BigInt {
        &self.coefficients[m]
    }

    pub fn into_coefficients(self) -> Vec<BigInt> {
        self.coefficients
    }

    fn support(&self) -> Vec<usize> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Truncated product.
    pub fn multiply(&self, other: &IntegerSeries) -> IntegerSeries {
        let order = self.order().min(other.order());
        let a = &self.coefficients[..=order];
        let b = &other.coefficients[..=order];
        let sa = self.support();
        let sb = other.support();
        let sa: Vec<usize> = sa.into_iter().filter(|&i| i <= order).collect();
        let sb: Vec<usize> = sb.into_iter().filter(|&i| i <= order).collect();
        if sa.is_empty() || sb.is_empty() {
            return IntegerSeries::zero(order);
        }

        if sa.len().saturating_mul(sb.len()) <= SCHOOLBOOK_LIMIT {
            return Self::schoolbook(a, &sa, b, &sb, order);
        }
        let same = std::ptr::eq(self, other) || a == b;
        let bits = max_bits(a) + max_bits(b) + usize_bits(sa.len().min(sb.len()));
        let product = if same {
            ntt::multiply_exact(a, None, order + 1, bits)
        } else {
            ntt::multiply_exact(a, Some(b), order + 1, bits)
        };
        match product {
            Some(c) => IntegerSeries::new(c, order),
            None => Self::schoolbook(a, &sa, b, &sb, order),
        }
    }

    fn schoolbook(a: &[BigInt], sa: &[usize], b: &[BigInt], sb: &[usize], order: usize) -> Self {
        let mut out = vec![BigInt::zero(); order + 1];
        for &i in sa {
            for &j in sb {
                if i + j > order {
                    break;
                }
                out[i + j] += &a[i] * &b[j];
            }
        }
        IntegerSeries::new(out, order)
    }

    /// `self^e` by repeated squaring, at the series' own order.
    pub fn pow(&self, mut e: u32) -> IntegerSeries {
        let mut acc: Option<IntegerSeries> = None;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.multiply(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base);
            }
        }
        acc.unwrap_or_else(|| IntegerSeries::one(self.order()))
    }

    /// Multiplies by `q^k`, keeping the order.
    pub fn shift(&self, k: usize) -> IntegerSeries {
        let mut c = vec![BigInt::zero(); k];
        c.extend_from_slice(&self.coefficients);
        IntegerSeries::new(c, self.order())
    }
}

impl Mul for &IntegerSeries {
    type Output = IntegerSeries;
    fn mul(self, rhs: &IntegerSeries) -> IntegerSeries {
        self.multiply(rhs)
    }
}

fn max_bits(c: &[BigInt]) -> u64 {
    c.iter().map(ntt::bit_length).max().unwrap_or(0)
}

fn usize_bits(n: usize) -> u64 {
    (usize::BITS - n.leading_zeros()) as u64
}

/// `prod_{n >= 1} (1 - q^n)` to order `order`, from the pentagonal number
/// theorem: `sum_k (-1)^k q^{k(3k-1)/2}` over all integers `k`.
pub fn euler_product_series(order: usize) -> IntegerSeries {
    let mut c = vec![BigInt::zero(); order + 1];
    c[0] = BigInt::one();
    for k in 1usize.. {
        let g1 = k * (3 * k - 1) / 2;
        if g1 > order {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        c[g1] += sign;
        let g2 = k * (3 * k + 1) / 2;
        if g2 <= order {
            c[g2] += sign;
        }
    }
    IntegerSeries::new(c, order)
}

/// `prod_{n >= 1} (1 - q^n)^3` to order `order`, via Jacobi's identity
/// `sum_{m >= 0} (-1)^m (2m + 1) q^{m(m+1)/2}`.
pub fn jacobi_cube_series(order: usize) -> IntegerSeries {
    let mut c = vec![BigInt::zero(); order + 1];
    for m in 0usize.. {
        let t = m * (m + 1) / 2;
        if t > order {
            break;
        }
        let v = BigInt::from(2 * m as i64 + 1);
        c[t] = if m % 2 == 0 { v } else { -v };
    }
    IntegerSeries::new(c, order)
}

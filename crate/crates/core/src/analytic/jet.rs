use num_complex::Complex64;

use crate::error::{Error, Result};

/// A truncated Taylor expansion `sum_{l <= m} c_l (s - s0)^l` with
/// normalized coefficients `c_l = f^{(l)}(s0) / l!`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorJet {
    base: Complex64,
    coefficients: Vec<Complex64>,
}

impl TaylorJet {
    /// A jet of order `coefficients.len() - 1`.
    pub fn new(base: Complex64, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::EmptyDomain("a jet needs at least one coefficient".into()));
        }
        Ok(TaylorJet { base, coefficients })
    }

    pub fn constant(base: Complex64, value: Complex64, order: usize) -> Self {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); order + 1];
        coefficients[0] = value;
        TaylorJet { base, coefficients }
    }

    /// The jet of `e^{s - s0}`.
    pub fn exp(base: Complex64, order: usize) -> Self {
        let mut coefficients = Vec::with_capacity(order + 1);
        let mut c = 1.0;
        for l in 0..=order {
            if l > 0 {
                c /= l as f64;
            }
            coefficients.push(Complex64::new(c, 0.0));
        }
        TaylorJet { base, coefficients }
    }

    pub fn base_point(&self) -> Complex64 {
        self.base
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficient(&self, l: usize) -> Complex64 {
        self.coefficients.get(l).copied().unwrap_or_default()
    }

    /// The truncated polynomial at `s`.
    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        let u = s - self.base;
        self.coefficients.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * u + c)
    }

    fn check_base(&self, other: &TaylorJet) -> Result<()> {
        if self.base != other.base {
            return Err(Error::Domain(format!(
                "jets at different base points {} and {}",
                self.base, other.base
            )));
        }
        Ok(())
    }

    /// Sum, truncated at the smaller order.
    pub fn add(&self, other: &TaylorJet) -> Result<TaylorJet> {
        self.check_base(other)?;
        let m = self.order().min(other.order());
        let coefficients = (0..=m).map(|l| self.coefficients[l] + other.coefficients[l]).collect();
        Ok(TaylorJet { base: self.base, coefficients })
    }

    /// Product, truncated at the smaller order.
    pub fn mul(&self, other: &TaylorJet) -> Result<TaylorJet> {
        self.check_base(other)?;
        Ok(self.mul_truncated(other, self.order().min(other.order())))
    }

    fn mul_truncated(&self, other: &TaylorJet, m: usize) -> TaylorJet {
        let coefficients = (0..=m)
            .map(|l| (0..=l).map(|i| self.coefficient(i) * other.coefficient(l - i)).sum())
            .collect();
        TaylorJet { base: self.base, coefficients }
    }

    pub fn scale(&self, c: Complex64) -> TaylorJet {
        TaylorJet {
            base: self.base,
            coefficients: self.coefficients.iter().map(|a| a * c).collect(),
        }
    }
}

/// `Res_{s = s0} (f g)^k h / (s - s0)^{2k}`: the coefficient of
/// `(s - s0)^{2k-1}` in `(f g)^k h`, i.e. the sum over
/// `l_1 + ... + l_{2k+1} = 2k - 1` of `f_{l_1} g_{l_2} ... h_{l_{2k+1}}`.
///
/// If `f(s0) = g(s0) = 0` every term carries one of those factors, so the
/// result is exactly zero.
pub fn residue_extract(f: &TaylorJet, g: &TaylorJet, h: &TaylorJet, k: usize) -> Result<Complex64> {
    if k == 0 {
        return Err(Error::Domain("residue_extract needs k >= 1".into()));
    }
    f.check_base(g)?;
    f.check_base(h)?;
    let m = 2 * k - 1;
    let have = f.order().min(g.order()).min(h.order());
    if have < m {
        return Err(Error::Order { have, need: m });
    }
    let fg = f.mul_truncated(g, m);
    let mut acc = h.mul_truncated(&fg, m);
    for _ in 1..k {
        acc = acc.mul_truncated(&fg, m);
    }
    Ok(acc.coefficients[m])
}

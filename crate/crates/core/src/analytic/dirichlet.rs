use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rankin_selberg::{CoefficientStream, RSPair};

/// What is known about the coefficients beyond the end of a stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TailModel {
    /// All coefficients are 1; the tail is summed by Euler-Maclaurin.
    Zeta,
    /// `|lambda(n)| <= n^theta d_degree(n)`, which holds whenever every local
    /// parameter satisfies `|alpha| <= p^theta`.
    Majorant { degree: usize, theta: f64 },
}

impl TailModel {
    /// The majorant implied by the pair's degree and local bound.
    pub fn for_pair(pair: &RSPair) -> Self {
        if pair.is_zeta() {
            TailModel::Zeta
        } else {
            TailModel::Majorant {
                degree: pair.degree(),
                theta: pair.theta_bound(),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirichletValue {
    /// Partial sum plus any tail correction.
    pub value: Complex64,
    pub partial_sum: Complex64,
    /// Certified bound on `|L(s) - value|`.
    pub tail_bound: f64,
    pub terms: usize,
}

/// `sum_n lambda(n) n^{-s}` from a stream, with a certified tail bound.
///
/// Fails with `InsufficientLimit` when the bound cannot be made `<= tol`,
/// which includes every `s` on or left of the abscissa of the majorant.
pub fn dirichlet_eval(stream: &CoefficientStream, s: Complex64, tail: TailModel, tol: f64) -> Result<DirichletValue> {
    let x = stream.limit();
    let partial_sum = partial_dirichlet_sum(stream.lambdas(), s);
    let (value, tail_bound) = match tail {
        TailModel::Zeta => {
            if stream.lambdas()[1..].iter().any(|&c| c != Complex64::new(1.0, 0.0)) {
                return Err(Error::Domain(format!("stream {} is not zeta", stream.label())));
            }
            if s.re <= 1.0 {
                return Err(Error::InsufficientLimit(format!("zeta series diverges at Re(s) = {}", s.re)));
            }
            let (correction, bound) = zeta_tail(s, x as f64);
            (partial_sum + correction, bound)
        }
        TailModel::Majorant { degree, theta } => (partial_sum, majorant_tail(s.re - theta, degree, x as f64)),
    };
    if !(tail_bound <= tol) {
        return Err(Error::InsufficientLimit(format!(
            "tail bound {tail_bound:.3e} at s = {s} with {x} terms exceeds tol {tol:.3e}"
        )));
    }
    Ok(DirichletValue {
        value,
        partial_sum,
        tail_bound,
        terms: x,
    })
}

fn partial_dirichlet_sum(lambda: &[Complex64], s: Complex64) -> Complex64 {
    // from the small terms upwards
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, c) in lambda.iter().enumerate().skip(1).rev() {
        if *c != Complex64::new(0.0, 0.0) {
            acc += c * (-s * (n as f64).ln()).exp();
        }
    }
    acc
}

/// Euler-Maclaurin for `sum_{n > x} n^{-s}` through the `B_4` term, with
/// the remainder bound `2 zeta(4) / (2 pi)^4 int_x^inf |f''''|`.
fn zeta_tail(s: Complex64, x: f64) -> (Complex64, f64) {
    let xs = (-s * x.ln()).exp();
    let correction = xs * x / (s - 1.0) - xs / 2.0 + s * xs / (12.0 * x)
        - s * (s + 1.0) * (s + 2.0) * xs / (720.0 * x.powi(3));
    let sigma = s.re;
    let d4 = (s * (s + 1.0) * (s + 2.0) * (s + 3.0)).norm();
    let zeta4 = PI.powi(4) / 90.0;
    let bound = 2.0 * zeta4 / (2.0 * PI).powi(4) * d4 * x.powf(-sigma - 3.0) / (sigma + 3.0);
    (correction, bound)
}

/// `sum_{n > x} d_k(n) n^{-sigma} <= min_{1 < a < sigma} x^{a - sigma} zeta(a)^k`.
fn majorant_tail(sigma: f64, degree: usize, x: f64) -> f64 {
    if sigma <= 1.0 {
        return f64::INFINITY;
    }
    (1..128)
        .map(|j| 1.0 + (sigma - 1.0) * j as f64 / 128.0)
        .map(|a| x.powf(a - sigma) * zeta_real(a).powi(degree as i32))
        .fold(f64::INFINITY, f64::min)
}

/// `zeta(sigma)` for real `sigma > 1`.
fn zeta_real(sigma: f64) -> f64 {
    const N: usize = 32;
    let head: f64 = (1..=N).map(|n| (n as f64).powf(-sigma)).sum();
    let (tail, _) = zeta_tail(Complex64::new(sigma, 0.0), N as f64);
    head + tail.re
}

/// `sum_{n <= X} lambda(n) n^{-beta} e^{-n/x}` over the whole stream.
///
/// Requires `X >= 50 x`, so every dropped term is damped by `e^{-50}`.
pub fn smoothed_sum(stream: &CoefficientStream, beta: f64, x: f64) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("smoothing length must be positive, got {x}")));
    }
    let limit = stream.limit();
    if (limit as f64) < 50.0 * x {
        return Err(Error::InsufficientLimit(format!(
            "stream of length {limit} is shorter than 50 x = {}",
            50.0 * x
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, c) in stream.lambdas().iter().enumerate().skip(1).rev() {
        let n = n as f64;
        acc += c * (-beta * n.ln() - n / x).exp();
    }
    Ok(acc)
}

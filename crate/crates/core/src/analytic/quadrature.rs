use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Subintervals allowed per adaptive integration before giving up.
pub const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// Sum of the per-interval `|K15 - G7|` estimates.
    pub error_estimate: f64,
    pub evaluations: usize,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gauss_kronrod<F: Fn(f64) -> Complex64 + ?Sized>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).norm(),
    }
}

/// Adaptive G7/K15 quadrature of a complex-valued `f` over `[a, b]`, bisecting
/// the worst interval until the summed error estimate is below `tol`.
pub fn integrate<F: Fn(f64) -> Complex64 + ?Sized>(f: &F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite()) || !(tol > 0.0) {
        return Err(Error::Domain(format!("integrate needs finite limits and tol > 0, got [{a}, {b}], {tol}")));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            evaluations: 0,
            intervals: 0,
        });
    }
    let mut segments = vec![gauss_kronrod(f, a, b)];
    loop {
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let value = pairwise_sum(&segments.iter().map(|s| s.value).collect::<Vec<_>>());
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
        }
        if error <= tol {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                evaluations: 15 * (2 * segments.len() - 1),
                intervals: segments.len(),
            });
        }
        if segments.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "[{a}, {b}]: error estimate {error:.3e} above tol {tol:.3e} after {} intervals",
                segments.len()
            )));
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return Err(Error::Quadrature(format!("interval [{}, {}] cannot be bisected further", s.a, s.b)));
        }
        segments.push(gauss_kronrod(f, s.a, mid));
        segments.push(gauss_kronrod(f, mid, s.b));
        // keep the summation order independent of the refinement history
        segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    }
}

fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        n => pairwise_sum(&values[..n / 2]) + pairwise_sum(&values[n / 2..]),
    }
}

/// Dyadic panels `[0, 1], [1, 2], [2, 4], ...` clipped at `t_max`.
fn dyadic_panels(t_max: f64) -> Vec<(f64, f64)> {
    let mut panels = Vec::new();
    let (mut lo, mut hi) = (0.0, 1.0f64);
    while lo < t_max {
        panels.push((lo, hi.min(t_max)));
        lo = hi;
        hi *= 2.0;
    }
    panels
}

/// `(1 / 2 pi i) int_{sigma - iT}^{sigma + iT} f(s) ds`, by adaptive
/// Gauss-Kronrod on dyadic panels in `t` (mirrored for `t < 0`). Panels run
/// in parallel; `tol` is an absolute tolerance on the returned value.
pub fn integrate_vertical<F>(f: F, sigma: f64, half_height: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    if !(half_height > 0.0 && half_height.is_finite()) {
        return Err(Error::Domain(format!("half height must be finite and positive, got {half_height}")));
    }
    let mut panels: Vec<(f64, f64)> = dyadic_panels(half_height).iter().rev().map(|&(a, b)| (-b, -a)).collect();
    panels.extend(dyadic_panels(half_height));
    // the integral over t is 2 pi times the value
    let panel_tol = tol * 2.0 * PI / panels.len() as f64;
    let g = |t: f64| f(Complex64::new(sigma, t));
    let parts: Vec<QuadratureResult> = panels
        .par_iter()
        .map(|&(a, b)| integrate(&g, a, b, panel_tol))
        .collect::<Result<_>>()?;
    let value = pairwise_sum(&parts.iter().map(|p| p.value).collect::<Vec<_>>());
    Ok(QuadratureResult {
        value: value / (2.0 * PI),
        error_estimate: parts.iter().map(|p| p.error_estimate).sum::<f64>() / (2.0 * PI),
        evaluations: parts.iter().map(|p| p.evaluations).sum(),
        intervals: parts.iter().map(|p| p.intervals).sum(),
    })
}

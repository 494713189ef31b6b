use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// The ramp `phi`: 1 on `(0, x]`, linear down to 0 on `(x, x + y]`, 0 beyond.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothingKernel {
    x: f64,
    y: f64,
}

impl SmoothingKernel {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x > 0.0 && y > 0.0 && y <= x && x.is_finite()) {
            return Err(Error::Domain(format!("kernel needs 0 < y <= x, got x = {x}, y = {y}")));
        }
        Ok(SmoothingKernel { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Right end of the support, `x + y`.
    pub fn support_end(&self) -> f64 {
        self.x + self.y
    }

    pub fn phi(&self, r: f64) -> f64 {
        mellin_phi(r, self)
    }

    pub fn phi_hat(&self, s: Complex64) -> Result<Complex64> {
        mellin_phi_hat(s, self)
    }
}

pub fn mellin_phi(r: f64, kernel: &SmoothingKernel) -> f64 {
    let SmoothingKernel { x, y } = *kernel;
    if r <= 0.0 || r > x + y {
        0.0
    } else if r <= x {
        1.0
    } else {
        (x + y - r) / y
    }
}

/// `phi_hat(s) = ((x + y)^{s+1} - x^{s+1}) / (y (s^2 + s))`, continued to
/// all `s != 0`.
///
/// `s = 0` is a simple pole (residue 1). At `s = -1` the numerator also
/// vanishes, so within `|s^2 + s| < 1e-4` of it the numerator is replaced by
/// its 4-term expansion in `w = s + 1`.
pub fn mellin_phi_hat(s: Complex64, kernel: &SmoothingKernel) -> Result<Complex64> {
    let SmoothingKernel { x, y } = *kernel;
    if s == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole { function: "phi_hat", at: s.to_string() });
    }
    let w = s + 1.0;
    if (s * w).norm() < 1e-4 && w.norm() < 0.5 {
        let (a, b) = ((x + y).ln(), x.ln());
        // (e^{wa} - e^{wb}) / w
        let d = |k: i32| a.powi(k) - b.powi(k);
        let quotient = d(1) + w * d(2) / 2.0 + w * w * d(3) / 6.0 + w * w * w * d(4) / 24.0;
        return Ok(quotient / (y * s));
    }
    // x^w ((1 + y/x)^w - 1), without the cancellation for small y/x
    let num = Complex64::new(x, 0.0).powc(w) * expm1(w * (y / x).ln_1p());
    Ok(num / (y * s * w))
}

fn expm1(z: Complex64) -> Complex64 {
    let half_sin = (z.im / 2.0).sin();
    Complex64::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * half_sin * half_sin,
        z.re.exp() * z.im.sin(),
    )
}

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::automorphic::PlaceType;
use crate::error::{Error, Result};

// Lanczos coefficients for g = 671/128, 14 terms.
const G: f64 = 5.2421875;
const C0: f64 = 0.999_999_999_999_997_1;
const COEFFS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

fn is_pole(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

/// `log Gamma(s)` for `Re(s) >= 1/2` (principal branch of the Lanczos form).
fn ln_gamma_right(s: Complex64) -> Complex64 {
    let mut ser = Complex64::new(C0, 0.0);
    for (j, c) in COEFFS.iter().enumerate() {
        ser += c / (s + (j + 1) as f64);
    }
    let tmp = s + G;
    (s + 0.5) * tmp.ln() - tmp + (ser * SQRT_TWO_PI / s).ln()
}

/// `Gamma(s)` via Lanczos, reflected for `Re(s) < 1/2`.
pub fn complex_gamma(s: Complex64) -> Result<Complex64> {
    if is_pole(s) {
        return Err(Error::Pole { function: "Gamma", at: s.to_string() });
    }
    if s.re < 0.5 {
        // Gamma(s) Gamma(1 - s) = pi / sin(pi s)
        let sin = (s * PI).sin();
        return Ok(PI / (sin * ln_gamma_right(1.0 - s).exp()));
    }
    Ok(ln_gamma_right(s).exp())
}

/// `log Gamma(s)` for `Re(s) >= 1/2`, continuous in `s` on that half-plane.
pub fn ln_gamma(s: Complex64) -> Result<Complex64> {
    if s.re < 0.5 {
        return Err(Error::Domain(format!("ln_gamma needs Re(s) >= 1/2, got {s}")));
    }
    Ok(ln_gamma_right(s))
}

/// The archimedean factor: `pi^{-s/2} Gamma(s/2)` for real places and
/// `2 (2 pi)^{-s} Gamma(s)` for complex ones.
pub fn gamma_v(s: Complex64, place: PlaceType) -> Result<Complex64> {
    match place {
        PlaceType::Real => Ok(Complex64::new(PI, 0.0).powc(-s / 2.0) * complex_gamma(s / 2.0)?),
        PlaceType::Complex => Ok(2.0 * Complex64::new(2.0 * PI, 0.0).powc(-s) * complex_gamma(s)?),
    }
}

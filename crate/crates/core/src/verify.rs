//! Invariant suites, each reduced to pass/fail and a worst-case margin
//! (nonnegative exactly when the suite passes).

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{integrate, residue_extract, SmoothingKernel, TaylorJet};
use crate::arith::{check_tau, gcd, ramanujan_tau};
use crate::automorphic::AutomorphicRep;
use crate::characters::{characters_mod, DirichletCharacter};
use crate::error::{Error, Result};
use crate::prime_counting::{orthogonality_decomposition, ramified_correction};
use crate::rankin_selberg::{
    auxiliary_product, check_decoupling, check_local_bounds, check_log_derivative, rs_stream, RSPair,
};

/// Every suite, in run order.
pub const SUITES: [&str; 10] = [
    "tau",
    "nonnegativity",
    "convolution",
    "decoupling",
    "grc",
    "log-derivative",
    "residue",
    "mellin",
    "orthogonality",
    "ramified",
];

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Coefficient range for the stream-based suites.
    pub limit: usize,
    /// Pairs for the decoupling, local-bound and log-derivative suites.
    pub pairs: Vec<RSPair>,
    /// Seed of the randomized residue suite.
    pub seed: u64,
    /// Slack of the nonnegativity, decoupling and local-bound suites.
    pub tol: f64,
    /// Run only these suites (all when `None`).
    pub only: Option<Vec<String>>,
}

impl VerifyConfig {
    /// `(Delta, Delta (x) chi)` with `chi` mod 5 of order 4, `(Delta, chi:8:1)`
    /// and `(Delta, Delta)`.
    pub fn with_default_pairs(limit: usize) -> Result<Self> {
        let d = AutomorphicRep::delta(limit as u64)?;
        let chi8 = DirichletCharacter::from_index(8, 1)?;
        Ok(VerifyConfig {
            limit,
            pairs: vec![
                RSPair::new(d.clone(), d.twist(&order_four_mod_five()?, 0.0)),
                RSPair::new(d.clone(), AutomorphicRep::character(chi8)),
                RSPair::new(d.clone(), d),
            ],
            seed: 20_240_601,
            tol: 1e-9,
            only: None,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub worst_margin: f64,
    pub checks: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub limit: usize,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

fn order_four_mod_five() -> Result<DirichletCharacter> {
    characters_mod(5)?
        .into_iter()
        .find(|c| c.order() == 4)
        .ok_or_else(|| Error::Domain("no character of order 4 mod 5".into()))
}

fn suite(name: &str, worst_margin: f64, checks: usize, detail: String) -> SuiteResult {
    SuiteResult {
        name: name.to_string(),
        passed: worst_margin >= 0.0,
        worst_margin,
        checks,
        detail,
    }
}

pub fn run_verification(config: &VerifyConfig) -> Result<VerifyReport> {
    if let Some(only) = &config.only {
        if let Some(bad) = only.iter().find(|n| !SUITES.contains(&n.as_str())) {
            return Err(Error::Domain(format!("unknown suite '{bad}'; known: {}", SUITES.join(", "))));
        }
    }
    let wanted = |name: &str| config.only.as_ref().map_or(true, |o| o.iter().any(|n| n == name));
    let mut suites = Vec::new();
    for name in SUITES.into_iter().filter(|n| wanted(n)) {
        let result = match name {
            "tau" => tau_suite(config.limit)?,
            "nonnegativity" => nonnegativity_suite(config.limit, config.tol)?,
            "convolution" => convolution_suite(config.limit)?,
            "decoupling" => decoupling_suite(config)?,
            "grc" => grc_suite(config)?,
            "log-derivative" => log_derivative_suite(config)?,
            "residue" => residue_suite(config.seed)?,
            "mellin" => mellin_suite(config.seed)?,
            "orthogonality" => orthogonality_suite(config.limit)?,
            "ramified" => ramified_suite(config.limit)?,
            _ => unreachable!(),
        };
        suites.push(result);
    }
    Ok(VerifyReport {
        limit: config.limit,
        suites,
    })
}

fn tau_suite(limit: usize) -> Result<SuiteResult> {
    let check = check_tau(&ramanujan_tau(limit as u64)?);
    let margin = if check.passed() { 1.0 - check.worst_deligne_ratio } else { -1.0 };
    Ok(suite(
        "tau",
        margin,
        check.multiplicative_pairs + check.hecke_relations + check.deligne_primes,
        format!("{} failures, worst Deligne ratio {:.6}", check.failures.len(), check.worst_deligne_ratio),
    ))
}

fn auxiliary_characters() -> Result<Vec<DirichletCharacter>> {
    Ok(vec![order_four_mod_five()?, DirichletCharacter::from_index(8, 1)?])
}

fn nonnegativity_suite(limit: usize, tol: f64) -> Result<SuiteResult> {
    let d = AutomorphicRep::delta(limit as u64)?;
    let mut worst = f64::INFINITY;
    let mut checks = 0;
    for chi in auxiliary_characters()? {
        let aux = auxiliary_product(&d, &d, &chi, limit)?;
        let s = aux.stream();
        for n in 1..=limit {
            worst = worst.min(s.lambda(n).re).min(s.biglambda(n).re);
            checks += 2;
        }
    }
    Ok(suite(
        "nonnegativity",
        worst + tol,
        checks,
        format!("smallest lambda_D or Lambda_D: {worst:.3e}"),
    ))
}

fn convolution_suite(limit: usize) -> Result<SuiteResult> {
    const TOL: f64 = 1e-12;
    let d = AutomorphicRep::delta(limit as u64)?;
    let mut worst = 0.0f64;
    let mut checks = 0;
    for chi in auxiliary_characters()? {
        let aux = auxiliary_product(&d, &d, &chi, limit)?;
        let direct = aux.direct_stream()?;
        for n in 1..=limit {
            let a = aux.stream().lambda(n);
            worst = worst.max((a - direct.lambda(n)).norm() / a.norm().max(1.0));
            checks += 1;
        }
    }
    Ok(suite(
        "convolution",
        TOL - worst,
        checks,
        format!("largest relative gap between the two lambda_D routes: {worst:.3e}"),
    ))
}

fn decoupling_suite(config: &VerifyConfig) -> Result<SuiteResult> {
    let mut margin = f64::INFINITY;
    let mut violations = 0;
    for pair in &config.pairs {
        let r = check_decoupling(pair, config.limit, config.tol)?;
        margin = margin.min(r.worst_margin + config.tol);
        violations += r.violations.len();
    }
    Ok(suite(
        "decoupling",
        margin,
        2 * config.limit * config.pairs.len(),
        format!("{violations} violations"),
    ))
}

fn grc_suite(config: &VerifyConfig) -> Result<SuiteResult> {
    let mut margin = f64::INFINITY;
    let mut checks = 0;
    let mut details = Vec::new();
    for pair in &config.pairs {
        let r = check_local_bounds(pair, config.limit as u64, config.tol)?;
        margin = margin.min(1.0 + config.tol - r.worst_js_ratio.max(r.worst_ramanujan_ratio));
        checks += 2 * r.parameters_checked;
        if !r.passed() {
            details.push(format!(
                "{}: {} |a| > p, {} |a| > p^theta",
                r.pair,
                r.jacquet_shalika_violations.len(),
                r.ramanujan_violations.len()
            ));
        }
    }
    let detail = if details.is_empty() { "all parameters within both bounds".into() } else { details.join("; ") };
    Ok(suite("grc", margin, checks, detail))
}

fn log_derivative_suite(config: &VerifyConfig) -> Result<SuiteResult> {
    const TOL: f64 = 1e-9;
    let mut margin = f64::INFINITY;
    for pair in &config.pairs {
        let stream = rs_stream(pair, config.limit)?;
        let scale = (1..=config.limit)
            .map(|n| stream.lambda(n).norm() * (n as f64).ln())
            .fold(1.0, f64::max);
        let r = check_log_derivative(&stream);
        margin = margin.min(TOL - r.max_abs_error / scale);
    }
    Ok(suite(
        "log-derivative",
        margin,
        config.limit * config.pairs.len(),
        "lambda(n) log n = sum_{d | n} Lambda(d) lambda(n/d)".into(),
    ))
}

/// `Res_{s0} (f g)^k h / (s - s0)^{2k}` by the trapezoid rule on a circle.
pub fn residue_by_contour(f: &TaylorJet, g: &TaylorJet, h: &TaylorJet, k: usize, radius: f64, nodes: usize) -> Complex64 {
    let s0 = f.base_point();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let e = Complex64::from_polar(radius, 2.0 * PI * j as f64 / nodes as f64);
        let s = s0 + e;
        let fg = f.evaluate(s) * g.evaluate(s);
        acc += fg.powu(k as u32) * h.evaluate(s) / e.powu(2 * k as u32 - 1);
    }
    acc / nodes as f64
}

fn residue_suite(seed: u64) -> Result<SuiteResult> {
    const TOL: f64 = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut zero_failures = 0;
    for trial in 0..100 {
        let k = 1 + trial % 2;
        let s0 = Complex64::new(rng.gen_range(0.0..2.0), rng.gen_range(-5.0..5.0));
        let mut jet = || {
            let c = (0..2 * k)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            TaylorJet::new(s0, c)
        };
        let (f, g, h) = (jet()?, jet()?, jet()?);
        let got = residue_extract(&f, &g, &h, k)?;
        let contour = residue_by_contour(&f, &g, &h, k, 0.1, 4096);
        worst = worst.max((got - contour).norm() / contour.norm());

        let vanish = |j: &TaylorJet| {
            let mut c = j.coefficients().to_vec();
            c[0] = Complex64::new(0.0, 0.0);
            TaylorJet::new(s0, c)
        };
        if residue_extract(&vanish(&f)?, &vanish(&g)?, &h, k)? != Complex64::new(0.0, 0.0) {
            zero_failures += 1;
        }
    }
    let margin = if zero_failures > 0 { -1.0 } else { TOL - worst };
    Ok(suite(
        "residue",
        margin,
        200,
        format!("worst relative gap to the contour {worst:.3e}, {zero_failures} nonzero residues at double zeros"),
    ))
}

/// `int_0^inf phi(r) r^{s-1} dr` by quadrature (`r = x u^2` on `(0, x]`).
fn phi_hat_by_quadrature(s: Complex64, kernel: &SmoothingKernel) -> Result<Complex64> {
    let (x, y) = (kernel.x(), kernel.y());
    let head = |u: f64| {
        if u == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            2.0 * x * u * Complex64::new(x * u * u, 0.0).powc(s - 1.0)
        }
    };
    let ramp = |r: f64| Complex64::new(r, 0.0).powc(s - 1.0) * (x + y - r) / y;
    Ok(integrate(&head, 0.0, 1.0, 1e-13)?.value + integrate(&ramp, x, x + y, 1e-13)?.value)
}

fn mellin_suite(seed: u64) -> Result<SuiteResult> {
    const TOL: f64 = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d65_6c6c);
    let kernel = SmoothingKernel::new(10.0, 2.5)?;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let s = Complex64::new(rng.gen_range(0.5..3.0), rng.gen_range(-10.0..10.0));
        let closed = kernel.phi_hat(s)?;
        let quad = phi_hat_by_quadrature(s, &kernel)?;
        worst = worst.max((closed - quad).norm() / closed.norm().max(1.0));
    }
    let one = kernel.phi_hat(Complex64::new(1.0, 0.0))?;
    let at_one = (one - (kernel.x() + kernel.y() / 2.0)).norm() / one.norm();
    let margin = (TOL - worst).min(4.0 * f64::EPSILON - at_one);
    Ok(suite(
        "mellin",
        margin,
        21,
        format!("worst gap to quadrature {worst:.3e}, phi_hat(1) off by {at_one:.1e} relative"),
    ))
}

fn orthogonality_suite(limit: usize) -> Result<SuiteResult> {
    const TOL: f64 = 1e-9;
    let x = limit as f64 / 1.25;
    let kernel = SmoothingKernel::new(x, x / 4.0)?;
    let d = AutomorphicRep::delta(limit as u64)?;
    let pair = RSPair::new(d.clone(), d);
    let mut worst = 0.0f64;
    let mut checks = 0;
    for q in [3u64, 5, 8] {
        for a in (1..q).filter(|&a| gcd(a, q) == 1) {
            worst = worst.max(orthogonality_decomposition(&pair, q, a, &kernel)?.relative_difference);
            checks += 1;
        }
    }
    Ok(suite(
        "orthogonality",
        TOL - worst,
        checks,
        format!("largest relative difference {worst:.3e}"),
    ))
}

fn ramified_suite(limit: usize) -> Result<SuiteResult> {
    let x = limit as f64 / 1.25;
    let kernel = SmoothingKernel::new(x, x / 4.0)?;
    let d = AutomorphicRep::delta(limit as u64)?;
    let pair = RSPair::new(d.clone(), d);
    let mut margin = f64::INFINITY;
    let mut checks = 0;
    let mut characters: Vec<DirichletCharacter> =
        characters_mod(8)?.into_iter().filter(|c| c.conductor() == 4).collect();
    characters.push(DirichletCharacter::principal(8)?);
    characters.extend(characters_mod(12)?);
    for psi in &characters {
        let r = ramified_correction(&pair, psi, &kernel)?;
        margin = margin.min(r.bound - r.exact.norm());
        checks += 1;
    }
    Ok(suite("ramified", margin, checks, "|exact difference| <= bound".into()))
}

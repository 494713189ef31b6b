//! Sums of `Lambda_{pi x pi'}(n)` over arithmetic progressions, their main
//! terms and error terms, the smoothed character decomposition, and short
//! interval sums.

mod experiment;

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::SmoothingKernel;
use crate::arith::{euler_phi, factorize, gcd, sieve_primes};
use crate::automorphic::AutomorphicRep;
use crate::characters::{characters_mod, DirichletCharacter};
use crate::error::{Error, Result};
use crate::rankin_selberg::{rs_biglambda_terms, twisted_pair, RSPair};

pub use experiment::{sw_experiment, SWExperiment, SWSummary};

/// Unramified primes compared when deciding whether `pi' = pi~ (x) |det|^{iu}`.
pub const DETECTION_PRIMES: usize = 25;
/// Tolerance of that comparison.
pub const DETECTION_TOL: f64 = 1e-9;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn check_class(q: u64, a: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::Domain("modulus q must be positive".into()));
    }
    if gcd(a % q, q) != 1 {
        return Err(Error::Domain(format!("residue {a} is not coprime to {q}")));
    }
    Ok(a % q)
}

/// `(n, Lambda(n))` for prime powers `n <= x`; empty for `x < 2`.
fn terms_up_to(pair: &RSPair, x: f64) -> Result<Vec<(u64, Complex64)>> {
    if !(x >= 2.0) {
        return Ok(Vec::new());
    }
    rs_biglambda_terms(pair, x.floor() as u64)
}

/// `psi(x; q, a) = sum_{n <= x, n = a (q)} Lambda_{pi x pi'}(n)`.
pub fn psi_ap(pair: &RSPair, x: f64, q: u64, a: u64) -> Result<Complex64> {
    let a = check_class(q, a)?;
    Ok(terms_up_to(pair, x)?
        .iter()
        .filter(|(n, _)| n % q == a)
        .map(|t| t.1)
        .sum())
}

/// `psi(x; q, r)` for every residue `0 <= r < q`, coprime or not, in one pass.
pub fn psi_classes(pair: &RSPair, x: f64, q: u64) -> Result<Vec<Complex64>> {
    if q == 0 {
        return Err(Error::Domain("modulus q must be positive".into()));
    }
    let mut out = vec![zero(); q as usize];
    for (n, b) in terms_up_to(pair, x)? {
        out[(n % q) as usize] += b;
    }
    Ok(out)
}

/// Multiset equality up to `tol`, by greedy matching.
fn same_parameters(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        let hit = b
            .iter()
            .enumerate()
            .position(|(j, y)| !used[j] && (x - y).norm() <= tol * x.norm().max(1.0));
        hit.map(|j| used[j] = true).is_some()
    })
}

/// The `u` with `right = left~ (x) |det|^{iu}`, if there is one.
///
/// The candidate is the difference of the real twists of `right` and
/// `left~`; it is accepted when the Satake parameters agree at the first
/// [`DETECTION_PRIMES`] primes where neither side ramifies.
pub fn contragredient_shift(pair: &RSPair) -> Option<f64> {
    let (left, right) = (pair.left(), pair.right());
    if left.degree() != right.degree() {
        return None;
    }
    let dual = left.contragredient();
    let u = right.real_twist() - dual.real_twist();
    let expected = dual.twist_by_real(u);
    let ramified = pair.ramified_primes();
    let limit = pair.data_limit().min(10_000);
    let primes = sieve_primes(limit).ok()?;
    let mut checked = 0;
    for p in primes.into_iter().filter(|p| !ramified.contains(p)).take(DETECTION_PRIMES) {
        let (Ok(r), Ok(e)) = (right.satake_at(p), expected.satake_at(p)) else {
            return None;
        };
        if !same_parameters(&r.values, &e.values, DETECTION_TOL) {
            return None;
        }
        checked += 1;
    }
    (checked > 0).then_some(u)
}

/// `x^{1-iu} / (1 - iu)` when `pi' = pi~ (x) |det|^{iu}`, otherwise 0.
pub fn main_term(pair: &RSPair, x: f64) -> Complex64 {
    contragredient_shift(pair).map_or(zero(), |u| main_term_at(u, x))
}

fn main_term_at(u: f64, x: f64) -> Complex64 {
    let w = Complex64::new(1.0, -u);
    x * Complex64::from_polar(1.0, -u * x.ln()) / w
}

/// The characters mod `q` whose primitive twist of the pair has a pole,
/// with the shift `u` of that pole.
#[derive(Debug, Clone)]
pub(crate) struct MainTermAggregate {
    q: u64,
    phi_q: f64,
    poles: Vec<(DirichletCharacter, f64)>,
}

impl MainTermAggregate {
    /// Exhaustive search over the characters mod `q`.
    pub(crate) fn new(pair: &RSPair, q: u64) -> Result<Self> {
        let mut poles = Vec::new();
        for chi in characters_mod(q)? {
            let primitive = chi.primitivize();
            if let Some(u) = contragredient_shift(&twisted_pair(pair, &primitive, 0.0)) {
                poles.push((chi, u));
            }
        }
        Ok(MainTermAggregate {
            q,
            phi_q: euler_phi(q) as f64,
            poles,
        })
    }

    /// `(1 / phi(q)) sum_chi conj(chi(a)) M_{pi x (pi' (x) chi)}(x)`.
    pub(crate) fn at(&self, x: f64, a: u64) -> Complex64 {
        let total: Complex64 = self
            .poles
            .iter()
            .map(|(chi, u)| chi.evaluate(a as i64).conj() * main_term_at(*u, x))
            .sum();
        total / self.phi_q
    }

    pub(crate) fn characters(&self) -> Vec<String> {
        self.poles.iter().map(|(c, _)| c.to_string()).collect()
    }

    pub(crate) fn modulus(&self) -> u64 {
        self.q
    }
}

/// One progression at one `x`: the prime sum, its expected main term and
/// the error between them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SWReport {
    pub x: f64,
    pub q: u64,
    pub a: u64,
    pub psi: Complex64,
    pub main_term: Complex64,
    pub error: Complex64,
    /// `|error| / x`.
    pub normalized_error: f64,
}

impl SWReport {
    fn new(x: f64, q: u64, a: u64, psi: Complex64, main_term: Complex64) -> Self {
        let error = psi - main_term;
        SWReport {
            x,
            q,
            a,
            psi,
            main_term,
            error,
            normalized_error: error.norm() / x,
        }
    }
}

/// `psi(x; q, a)` against `(1 / phi(q)) sum_chi conj(chi(a)) M_{pi x (pi' (x) chi)}(x)`,
/// `chi` running over the primitive characters inducing those mod `q`.
/// At most one of them contributes for the supported objects.
pub fn sw_error(pair: &RSPair, x: f64, q: u64, a: u64) -> Result<SWReport> {
    let a = check_class(q, a)?;
    let psi = psi_ap(pair, x, q, a)?;
    let main = MainTermAggregate::new(pair, q)?.at(x, a);
    Ok(SWReport::new(x, q, a, psi, main))
}

/// Both sides of
/// `sum_{n = a (q)} Lambda(n) phi(n) = (1 / phi(q)) sum_psi conj(psi(a)) sum_n Lambda(n) psi(n) phi(n)`,
/// each computed on its own.
#[derive(Debug, Clone, Serialize)]
pub struct OrthogonalityDecomposition {
    pub q: u64,
    pub a: u64,
    /// The filtered sum.
    pub direct: Complex64,
    /// `(1 / phi(q)) sum_psi conj(psi(a)) S_psi`.
    pub via_characters: Complex64,
    /// `S_psi = sum_n Lambda(n) psi(n) phi(n)` in `characters_mod(q)` order.
    pub character_sums: Vec<Complex64>,
    /// `sum_n |Lambda(n)| phi(n)`, the scale of the identity.
    pub scale: f64,
    pub difference: f64,
    pub relative_difference: f64,
}

pub fn orthogonality_decomposition(
    pair: &RSPair,
    q: u64,
    a: u64,
    kernel: &SmoothingKernel,
) -> Result<OrthogonalityDecomposition> {
    let a = check_class(q, a)?;
    let terms = terms_up_to(pair, kernel.support_end())?;
    let weighted: Vec<(u64, Complex64)> = terms
        .iter()
        .map(|&(n, b)| (n, b * kernel.phi(n as f64)))
        .collect();
    let direct: Complex64 = weighted.iter().filter(|(n, _)| n % q == a).map(|t| t.1).sum();
    let scale: f64 = weighted.iter().map(|t| t.1.norm()).sum();

    let characters = characters_mod(q)?;
    let mut character_sums = Vec::with_capacity(characters.len());
    let mut via = zero();
    for psi in &characters {
        let table: Vec<Complex64> = (0..q).map(|r| psi.evaluate(r as i64)).collect();
        let s: Complex64 = weighted.iter().map(|&(n, w)| w * table[(n % q) as usize]).sum();
        via += psi.evaluate(a as i64).conj() * s;
        character_sums.push(s);
    }
    let via_characters = via / characters.len() as f64;
    let difference = (direct - via_characters).norm();
    Ok(OrthogonalityDecomposition {
        q,
        a,
        direct,
        via_characters,
        character_sums,
        scale,
        difference,
        relative_difference: if scale > 0.0 { difference / scale } else { difference },
    })
}

/// `sum Lambda_{pi x pi'}(n) psi(n) phi(n) - sum Lambda_{pi x (pi' (x) chi)}(n) phi(n)`
/// for `chi` the primitive character inducing `psi`, with the bound
/// `n n' sum_{p | q N N'} sum_{l <= log(2x)/log p} p^{l theta} log p`.
#[derive(Debug, Clone, Serialize)]
pub struct RamifiedCorrection {
    pub character: String,
    pub primitive: String,
    pub exact: Complex64,
    pub bound: f64,
    /// Primes at which the two sums differ termwise.
    pub support: Vec<u64>,
    /// Primes entering the bound.
    pub bad_primes: Vec<u64>,
}

impl RamifiedCorrection {
    pub fn within_bound(&self) -> bool {
        self.exact.norm() <= self.bound
    }
}

pub fn ramified_correction(
    pair: &RSPair,
    psi: &DirichletCharacter,
    kernel: &SmoothingKernel,
) -> Result<RamifiedCorrection> {
    let chi = psi.primitivize();
    let twisted = twisted_pair(pair, &chi, 0.0);
    let end = kernel.support_end();
    let plain = terms_up_to(pair, end)?;
    let other = terms_up_to(&twisted, end)?;
    let mut exact = zero();
    let mut support = Vec::new();
    // both lists run over the same prime powers in the same order
    for (&(n, a), &(m, b)) in plain.iter().zip(&other) {
        debug_assert_eq!(n, m);
        let w = kernel.phi(n as f64);
        let d = (a * psi.evaluate(n as i64) - b) * w;
        if d.norm() > 1e-9 * a.norm().max(b.norm()).max(1.0) {
            let p = factorize(n)?.factors()[0].0;
            if !support.contains(&p) {
                support.push(p);
            }
        }
        exact += d;
    }
    support.sort_unstable();
    let bad_primes = bound_primes(pair, psi.modulus())?;
    let bound = ramified_bound(pair, &bad_primes, kernel.x());
    Ok(RamifiedCorrection {
        character: psi.to_string(),
        primitive: chi.to_string(),
        exact,
        bound,
        support,
        bad_primes,
    })
}

fn bound_primes(pair: &RSPair, q: u64) -> Result<Vec<u64>> {
    let levels = [q, pair.left().conductor(), pair.right().conductor()];
    let mut ps = Vec::new();
    for m in levels {
        ps.extend(factorize(m)?.primes());
    }
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

fn ramified_bound(pair: &RSPair, primes: &[u64], x: f64) -> f64 {
    let theta = pair.theta_bound();
    let nn = pair.degree() as f64;
    let mut total = 0.0;
    for &p in primes {
        let log_p = (p as f64).ln();
        let top = ((2.0 * x).ln() / log_p).floor() as i32;
        for l in 1..=top {
            total += (p as f64).powf(l as f64 * theta) * log_p;
        }
    }
    nn * total
}

/// `sum_{X < n <= X e^{1/T}} |Lambda(n)|`, its ratio against `X / T`, and
/// the Cauchy-Schwarz comparison with the two diagonal pairs.
#[derive(Debug, Clone, Serialize)]
pub struct ShortIntervalReport {
    pub x: f64,
    pub t: f64,
    /// `X e^{1/T}`.
    pub upper: f64,
    pub sum_abs_lambda: f64,
    /// `sum_abs_lambda * T / X`.
    pub ratio: f64,
    /// `sum Lambda_{pi x pi~}` over the interval.
    pub left_diagonal: f64,
    /// `sum Lambda_{pi' x pi'~}` over the interval.
    pub right_diagonal: f64,
    /// `sqrt(left_diagonal * right_diagonal)`.
    pub cauchy_schwarz_bound: f64,
}

impl ShortIntervalReport {
    pub fn cauchy_schwarz_holds(&self) -> bool {
        self.sum_abs_lambda <= self.cauchy_schwarz_bound * (1.0 + 1e-12) + 1e-12
    }
}

/// The `T = X / Y` with `Y = X^{1 - 1/(16 max(n, n')^2)}`.
pub fn short_interval_t(pair: &RSPair, x: f64) -> f64 {
    let m = pair.left().degree().max(pair.right().degree()) as f64;
    x.powf(1.0 / (16.0 * m * m))
}

pub fn short_interval_sum(pair: &RSPair, x: f64, t: f64) -> Result<ShortIntervalReport> {
    if !(t >= 1.0) || !(x >= 1.0) {
        return Err(Error::Domain(format!("short intervals need X >= 1 and T >= 1, got X = {x}, T = {t}")));
    }
    let upper = x * (1.0 / t).exp();
    let interval_sum = |p: &RSPair, f: fn(Complex64) -> f64| -> Result<f64> {
        Ok(terms_up_to(p, upper)?
            .iter()
            .filter(|(n, _)| *n as f64 > x)
            .map(|t| f(t.1))
            .sum())
    };
    let diagonal = |r: &AutomorphicRep| RSPair::new(r.clone(), r.contragredient());
    let sum_abs_lambda = interval_sum(pair, |z| z.norm())?;
    let left_diagonal = interval_sum(&diagonal(pair.left()), |z| z.re)?;
    let right_diagonal = interval_sum(&diagonal(pair.right()), |z| z.re)?;
    Ok(ShortIntervalReport {
        x,
        t,
        upper,
        sum_abs_lambda,
        ratio: sum_abs_lambda * t / x,
        left_diagonal,
        right_diagonal,
        cauchy_schwarz_bound: (left_diagonal.max(0.0) * right_diagonal.max(0.0)).sqrt(),
    })
}

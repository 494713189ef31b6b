//! Automorphic representations at desk scale and their local data.
//!
//! Four kinds are supported: GL(1) Dirichlet characters, the level-one
//! weight-12 newform `Delta` (or any trivial-nebentypus newform given by an
//! eigenvalue table), generic GL(n) Satake tables read from files, and
//! isobaric sums of these. Any of them can be twisted by a Dirichlet
//! character and by `|det|^{it}`.
//!
//! Twisting characters are always stored primitively; composing two twists
//! multiplies them and passes to the primitive character inducing the
//! product, which is how idele class characters compose. At primes where a
//! twist (or a newform level) ramifies the local parameters are the
//! available ones padded with zeros, an approximation of the true ramified
//! local factor that only affects finitely many primes.

mod ingest;

use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::arith::ramanujan_tau;
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};

pub use ingest::{parse_complex, read_satake_table, write_satake_table, SatakeTable};

/// The generic Ramanujan-bound exponent `1/2 - 1/(n^2 + 1)`.
pub fn theta_n(degree: usize) -> f64 {
    let n = degree as f64;
    0.5 - 1.0 / (n * n + 1.0)
}

/// Shape of an archimedean Gamma factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum PlaceType {
    /// `pi^{-s/2} Gamma(s/2)`
    Real,
    /// `2 (2 pi)^{-s} Gamma(s)`
    Complex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchimedeanParameters {
    pub mu: Vec<Complex64>,
    pub kinds: Vec<PlaceType>,
}

impl ArchimedeanParameters {
    pub fn real(mu: Vec<Complex64>) -> Self {
        let kinds = vec![PlaceType::Real; mu.len()];
        ArchimedeanParameters { mu, kinds }
    }

    /// `prod_j (|mu_j + it| + 3)`, with a complex-type entry counted as its
    /// real-type pair `mu, mu + 1`.
    pub fn conductor_factor(&self, t: f64) -> f64 {
        let it = Complex64::new(0.0, t);
        self.mu
            .iter()
            .zip(&self.kinds)
            .map(|(&mu, kind)| match kind {
                PlaceType::Real => (mu + it).norm() + 3.0,
                PlaceType::Complex => ((mu + it).norm() + 3.0) * ((mu + 1.0 + it).norm() + 3.0),
            })
            .product()
    }

    fn shifted(&self, t: f64) -> Self {
        ArchimedeanParameters {
            mu: self.mu.iter().map(|m| m + Complex64::new(0.0, t)).collect(),
            kinds: self.kinds.clone(),
        }
    }
}

/// Local parameters at one prime, zero-padded to the degree.
#[derive(Debug, Clone, PartialEq)]
pub struct SatakeParameters {
    pub prime: u64,
    pub values: Vec<Complex64>,
    pub theta_bound: f64,
}

impl SatakeParameters {
    /// `|alpha_j| <= p^theta` for every stored value, up to `tol`.
    pub fn satisfies_ramanujan_bound(&self, tol: f64) -> bool {
        let bound = (self.prime as f64).powf(self.theta_bound);
        self.values.iter().all(|a| a.norm() <= bound + tol)
    }

    pub fn nonzero_count(&self) -> usize {
        self.values.iter().filter(|a| a.norm() > 0.0).count()
    }
}

/// Hecke eigenvalue table of a trivial-nebentypus holomorphic newform,
/// normalized so that unramified Satake parameters lie on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct NewformData {
    pub name: String,
    pub weight: u32,
    pub level: u64,
    /// Primes `2, 3, 5, ...` up to the table limit, ascending.
    pub primes: Vec<u64>,
    /// `lambda(p) = a_p / p^{(k-1)/2}`.
    pub eigenvalues: Vec<f64>,
    /// Every prime `<= limit` is present.
    pub limit: u64,
    /// Relative precision of the stored eigenvalues.
    pub precision: f64,
}

impl NewformData {
    pub fn eigenvalue(&self, p: u64) -> Result<f64> {
        if p > self.limit {
            return Err(Error::InsufficientData { prime: p, limit: self.limit });
        }
        self.primes
            .binary_search(&p)
            .map(|i| self.eigenvalues[i])
            .map_err(|_| Error::Domain(format!("{p} is not prime")))
    }
}

static DELTA_CACHE: Mutex<Option<Arc<NewformData>>> = Mutex::new(None);

/// Eigenvalue table of `Delta` for all primes `<= limit`, cached per process.
pub fn delta_table(limit: u64) -> Result<Arc<NewformData>> {
    let mut cache = DELTA_CACHE.lock().expect("delta cache poisoned");
    if let Some(d) = cache.as_ref() {
        if d.limit >= limit {
            return Ok(Arc::clone(d));
        }
    }
    let limit = limit.max(2);
    let tau = ramanujan_tau(limit)?;
    let primes = crate::arith::sieve_primes(limit)?;
    let eigenvalues = primes.iter().map(|&p| tau.normalized(p)).collect();
    let data = Arc::new(NewformData {
        name: "delta".into(),
        weight: 12,
        level: 1,
        primes,
        eigenvalues,
        limit,
        precision: f64::EPSILON,
    });
    *cache = Some(Arc::clone(&data));
    Ok(data)
}

#[derive(Debug, Clone, PartialEq)]
pub enum RepKind {
    /// A GL(1) representation: a Dirichlet character.
    Character(DirichletCharacter),
    Newform(Arc<NewformData>),
    /// GL(n) parameters read from a table.
    Generic(Arc<SatakeTable>),
    /// `pi_1 [+] ... [+] pi_r`; twists are pushed down to the components.
    Isobaric(Vec<AutomorphicRep>),
}

/// `pi = pi* (x) chi (x) |det|^{it}` for one of the supported `pi*`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutomorphicRep {
    kind: RepKind,
    twist: Option<DirichletCharacter>,
    real_twist: f64,
    /// Parameters of a generic table are conjugated.
    dual: bool,
}

impl AutomorphicRep {
    fn base(kind: RepKind) -> Self {
        AutomorphicRep {
            kind,
            twist: None,
            real_twist: 0.0,
            dual: false,
        }
    }

    /// The trivial character, whose L-function is `zeta`.
    pub fn trivial() -> Self {
        Self::character(DirichletCharacter::principal(1).expect("modulus 1"))
    }

    pub fn character(chi: DirichletCharacter) -> Self {
        Self::base(RepKind::Character(chi))
    }

    /// `Delta` with eigenvalues for all primes `<= limit`.
    pub fn delta(limit: u64) -> Result<Self> {
        Ok(Self::newform(delta_table(limit)?))
    }

    pub fn newform(data: Arc<NewformData>) -> Self {
        Self::base(RepKind::Newform(data))
    }

    pub fn generic(table: SatakeTable) -> Self {
        Self::base(RepKind::Generic(Arc::new(table)))
    }

    pub fn isobaric(components: Vec<AutomorphicRep>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("an isobaric sum needs at least one component".into()));
        }
        Ok(Self::base(RepKind::Isobaric(components)))
    }

    pub fn kind(&self) -> &RepKind {
        &self.kind
    }

    pub fn twist_character(&self) -> Option<&DirichletCharacter> {
        self.twist.as_ref()
    }

    pub fn real_twist(&self) -> f64 {
        self.real_twist
    }

    pub fn degree(&self) -> usize {
        match &self.kind {
            RepKind::Character(_) => 1,
            RepKind::Newform(_) => 2,
            RepKind::Generic(t) => t.degree,
            RepKind::Isobaric(c) => c.iter().map(AutomorphicRep::degree).sum(),
        }
    }

    /// Exponent `theta` with `|alpha_j(p)| <= p^theta` for this representation.
    pub fn theta_bound(&self) -> f64 {
        match &self.kind {
            RepKind::Character(_) | RepKind::Newform(_) => 0.0,
            RepKind::Generic(t) => theta_n(t.degree),
            RepKind::Isobaric(c) => c.iter().map(AutomorphicRep::theta_bound).fold(0.0, f64::max),
        }
    }

    /// Largest prime with known local data.
    pub fn data_limit(&self) -> u64 {
        match &self.kind {
            RepKind::Character(_) => u64::MAX,
            RepKind::Newform(d) => d.limit,
            RepKind::Generic(t) => t.limit,
            RepKind::Isobaric(c) => c.iter().map(AutomorphicRep::data_limit).min().unwrap_or(u64::MAX),
        }
    }

    /// Isobaric components, or `self` alone.
    pub fn components(&self) -> Vec<&AutomorphicRep> {
        match &self.kind {
            RepKind::Isobaric(c) => c.iter().flat_map(AutomorphicRep::components).collect(),
            _ => vec![self],
        }
    }

    /// The full GL(1) content: base character (if any) times the twist,
    /// as a primitive character.
    pub fn character_content(&self) -> Option<DirichletCharacter> {
        let base = match &self.kind {
            RepKind::Character(chi) => Some(chi.clone()),
            _ => None,
        };
        match (base, &self.twist) {
            (None, None) => None,
            (Some(b), None) => Some(b),
            (None, Some(t)) => Some(t.clone()),
            (Some(b), Some(t)) => Some(b.mul(t).primitivize()),
        }
    }

    /// Parameters before any character or `|det|^{it}` twist, at a
    /// non-isobaric representation.
    pub(crate) fn core_parameters(&self, p: u64) -> Result<Vec<Complex64>> {
        let params = match &self.kind {
            RepKind::Character(_) => vec![Complex64::new(1.0, 0.0)],
            RepKind::Newform(d) => {
                let lambda = d.eigenvalue(p)?;
                if d.level % p == 0 {
                    vec![Complex64::new(lambda, 0.0), Complex64::new(0.0, 0.0)]
                } else {
                    let disc = Complex64::new(lambda * lambda - 4.0, 0.0).sqrt();
                    let l = Complex64::new(lambda, 0.0);
                    vec![(l + disc) / 2.0, (l - disc) / 2.0]
                }
            }
            RepKind::Generic(t) => {
                let v = t.parameters(p)?;
                if self.dual {
                    v.iter().map(Complex64::conj).collect()
                } else {
                    v.to_vec()
                }
            }
            RepKind::Isobaric(_) => unreachable!("isobaric sums are expanded by the caller"),
        };
        Ok(params)
    }

    /// Satake parameters at `p`.
    pub fn satake_at(&self, p: u64) -> Result<SatakeParameters> {
        if let RepKind::Isobaric(c) = &self.kind {
            let mut values = Vec::with_capacity(self.degree());
            for comp in c {
                values.extend(comp.satake_at(p)?.values);
            }
            return Ok(SatakeParameters {
                prime: p,
                values,
                theta_bound: self.theta_bound(),
            });
        }
        let core = self.core_parameters(p)?;
        let phase = Complex64::from_polar(1.0, -self.real_twist * (p as f64).ln());
        let chi = match &self.kind {
            RepKind::Character(_) => self
                .character_content()
                .map_or(Complex64::new(1.0, 0.0), |c| c.evaluate(p as i64)),
            _ => self.twist.as_ref().map_or(Complex64::new(1.0, 0.0), |t| t.evaluate(p as i64)),
        };
        let factor = chi * phase;
        Ok(SatakeParameters {
            prime: p,
            values: core.into_iter().map(|a| a * factor).collect(),
            theta_bound: self.theta_bound(),
        })
    }

    /// `pi~`: conjugate parameters, conjugate twist, negated real twist.
    pub fn contragredient(&self) -> Self {
        match &self.kind {
            RepKind::Isobaric(c) => Self::base(RepKind::Isobaric(c.iter().map(Self::contragredient).collect())),
            kind => {
                let kind = match kind {
                    RepKind::Character(chi) => RepKind::Character(chi.conj()),
                    other => other.clone(),
                };
                AutomorphicRep {
                    kind,
                    twist: self.twist.as_ref().map(DirichletCharacter::conj),
                    real_twist: -self.real_twist,
                    dual: matches!(self.kind, RepKind::Generic(_)) != self.dual,
                }
            }
        }
    }

    /// `pi (x) chi`, with the twist kept primitive.
    pub fn twist_by_character(&self, chi: &DirichletCharacter) -> Self {
        match &self.kind {
            RepKind::Isobaric(c) => {
                Self::base(RepKind::Isobaric(c.iter().map(|r| r.twist_by_character(chi)).collect()))
            }
            _ => {
                let combined = match &self.twist {
                    None => chi.primitivize(),
                    Some(t) => t.mul(chi).primitivize(),
                };
                let twist = if combined.modulus() == 1 { None } else { Some(combined) };
                AutomorphicRep {
                    twist,
                    ..self.clone()
                }
            }
        }
    }

    /// `pi (x) |det|^{it}`.
    pub fn twist_by_real(&self, t: f64) -> Self {
        match &self.kind {
            RepKind::Isobaric(c) => {
                Self::base(RepKind::Isobaric(c.iter().map(|r| r.twist_by_real(t)).collect()))
            }
            _ => AutomorphicRep {
                real_twist: self.real_twist + t,
                ..self.clone()
            },
        }
    }

    /// `pi (x) chi (x) |det|^{it}`.
    pub fn twist(&self, chi: &DirichletCharacter, t: f64) -> Self {
        self.twist_by_character(chi).twist_by_real(t)
    }

    /// Arithmetic conductor. For a twisted newform or table of degree `n`
    /// by a primitive character of conductor `d` this is `N d^n`, exact
    /// when `gcd(N, d) = 1` and a stand-in otherwise.
    pub fn conductor(&self) -> u64 {
        let twist_cond = self.twist.as_ref().map_or(1, DirichletCharacter::conductor);
        match &self.kind {
            RepKind::Character(_) => self.character_content().map_or(1, |c| c.conductor()),
            RepKind::Newform(d) => d.level * twist_cond.pow(2),
            RepKind::Generic(t) => t.conductor * twist_cond.pow(t.degree as u32),
            RepKind::Isobaric(c) => c.iter().map(AutomorphicRep::conductor).product(),
        }
    }

    /// Primes dividing the conductor.
    pub fn ramified_primes(&self) -> Vec<u64> {
        let c = self.conductor();
        let mut ps: Vec<u64> = crate::arith::factorize(c).map(|f| f.primes().collect()).unwrap_or_default();
        if let RepKind::Character(chi) = &self.kind {
            // an imprimitive character still vanishes at its modulus
            if let Ok(f) = crate::arith::factorize(chi.modulus()) {
                ps.extend(f.primes());
            }
        }
        for comp in self.components() {
            if let RepKind::Newform(d) = &comp.kind {
                if let Ok(f) = crate::arith::factorize(d.level) {
                    ps.extend(f.primes());
                }
            }
        }
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// Archimedean parameters, including the shift by the real twist.
    pub fn archimedean(&self) -> Result<ArchimedeanParameters> {
        let base = match &self.kind {
            RepKind::Character(_) => {
                let parity = self.character_content().map_or(0, |c| c.parity());
                ArchimedeanParameters::real(vec![Complex64::new(parity as f64, 0.0)])
            }
            RepKind::Newform(d) => {
                let k = d.weight as f64;
                ArchimedeanParameters::real(vec![
                    Complex64::new((k - 1.0) / 2.0, 0.0),
                    Complex64::new((k + 1.0) / 2.0, 0.0),
                ])
            }
            RepKind::Generic(t) => {
                let mu = t.archimedean.clone().ok_or_else(|| {
                    Error::Domain("no archimedean parameters in the Satake table".into())
                })?;
                let mu = if self.dual { mu.iter().map(Complex64::conj).collect() } else { mu };
                ArchimedeanParameters::real(mu)
            }
            RepKind::Isobaric(c) => {
                let mut mu = Vec::new();
                let mut kinds = Vec::new();
                for comp in c {
                    let a = comp.archimedean()?;
                    mu.extend(a.mu);
                    kinds.extend(a.kinds);
                }
                return Ok(ArchimedeanParameters { mu, kinds });
            }
        };
        Ok(base.shifted(self.real_twist))
    }

    /// `C(it, pi) = N prod_j (|mu_j + it| + 3)`.
    pub fn analytic_conductor(&self, t: f64) -> Result<f64> {
        Ok(self.conductor() as f64 * self.archimedean()?.conductor_factor(t))
    }
}

impl fmt::Display for AutomorphicRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let core = match &self.kind {
            RepKind::Character(chi) if chi.modulus() == 1 => "trivial".to_string(),
            RepKind::Character(chi) => format!("chi:{}:{}", chi.modulus(), chi.index()),
            RepKind::Newform(d) => d.name.clone(),
            RepKind::Generic(t) => t.name.clone(),
            RepKind::Isobaric(c) => {
                let parts: Vec<String> = c.iter().map(|r| r.to_string()).collect();
                return write!(f, "({})", parts.join(" [+] "));
            }
        };
        let core = if self.dual { format!("~{core}") } else { core };
        write!(f, "{core}")?;
        if let Some(t) = &self.twist {
            write!(f, "(x)chi:{}:{}", t.modulus(), t.index())?;
        }
        if self.real_twist != 0.0 {
            write!(f, "(x)|det|^{{{}i}}", self.real_twist)?;
        }
        Ok(())
    }
}

/// Parses a built-in object name or a table path:
/// `trivial`, `delta`, `chi:<q>:<index>`, `file:<path>` (or any path to an
/// existing file). `limit` sizes the built-in eigenvalue tables.
pub fn parse_rep(spec: &str, limit: u64) -> Result<AutomorphicRep> {
    let spec = spec.trim();
    match spec {
        "trivial" | "one" => return Ok(AutomorphicRep::trivial()),
        "delta" => return AutomorphicRep::delta(limit),
        _ => {}
    }
    if let Some(rest) = spec.strip_prefix("chi:") {
        let (q, idx) = rest
            .split_once(':')
            .ok_or_else(|| Error::Domain(format!("expected chi:<q>:<index>, got {spec:?}")))?;
        let q: u64 = q.parse().map_err(|_| Error::Domain(format!("bad modulus in {spec:?}")))?;
        let idx: u64 = idx.parse().map_err(|_| Error::Domain(format!("bad index in {spec:?}")))?;
        return Ok(AutomorphicRep::character(DirichletCharacter::from_index(q, idx)?));
    }
    let path = spec.strip_prefix("file:").unwrap_or(spec);
    let p = std::path::Path::new(path);
    if p.is_file() {
        let text = std::fs::read_to_string(p)?;
        let mut table = read_satake_table(&text)?;
        table.name = p.file_stem().map_or_else(|| path.to_string(), |s| s.to_string_lossy().into_owned());
        return Ok(AutomorphicRep::generic(table));
    }
    Err(Error::Domain(format!(
        "unknown object {spec:?}; expected trivial, delta, chi:<q>:<index> or a table file"
    )))
}

/// Parses `q:index` as a Dirichlet character.
pub fn parse_character(spec: &str) -> Result<DirichletCharacter> {
    let s = spec.trim().strip_prefix("chi:").unwrap_or(spec.trim());
    let (q, idx) = s
        .split_once(':')
        .ok_or_else(|| Error::Domain(format!("expected <q>:<index>, got {spec:?}")))?;
    let q: u64 = q.parse().map_err(|_| Error::Domain(format!("bad modulus in {spec:?}")))?;
    let idx: u64 = idx.parse().map_err(|_| Error::Domain(format!("bad index in {spec:?}")))?;
    DirichletCharacter::from_index(q, idx)
}

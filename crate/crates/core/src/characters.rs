//! Dirichlet characters modulo `q`.
//!
//! Over the rationals the narrow ray class group of the ideal `(q)` is just
//! `(Z/qZ)*` (positivity of the generator absorbs the real place), so its
//! characters are ordinary Dirichlet characters, and the primitive ray
//! class characters are the primitive Dirichlet characters.
//!
//! The group `(Z/qZ)*` is presented by an explicit generator basis: one
//! cyclic generator per odd prime power, `-1` for `4 | q`, and `5` for
//! `8 | q`. A character is the vector of exponents `a_i` with
//! `chi(g_i) = e(a_i / n_i)`, which makes products, conjugates and values
//! exact.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;

use crate::arith::{factorize, gcd, mod_pow, primitive_root_mod_prime};
use crate::error::{Error, Result};

/// `e(exponent / order)`, reduced: `gcd(exponent, order) = 1`, `exponent < order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    pub order: u64,
    pub exponent: u64,
}

impl RootOfUnity {
    pub fn new(exponent: u64, order: u64) -> Self {
        let exponent = exponent % order;
        let g = gcd(exponent, order);
        if exponent == 0 {
            return RootOfUnity { order: 1, exponent: 0 };
        }
        RootOfUnity {
            order: order / g,
            exponent: exponent / g,
        }
    }

    pub fn one() -> Self {
        RootOfUnity { order: 1, exponent: 0 }
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0
    }

    pub fn conj(&self) -> Self {
        RootOfUnity::new(self.order - self.exponent, self.order)
    }

    pub fn mul(&self, other: &RootOfUnity) -> Self {
        let order = self.order.lcm(&other.order);
        RootOfUnity::new(
            self.exponent * (order / self.order) + other.exponent * (order / other.order),
            order,
        )
    }

    /// Complex rendering; quarter turns are exact.
    pub fn to_complex(&self) -> Complex64 {
        match (self.exponent, self.order) {
            (0, _) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            (k, n) => Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64),
        }
    }
}

/// A character value: zero off the units, a root of unity on them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharValue {
    Zero,
    Root(RootOfUnity),
}

impl CharValue {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root(r) => r.to_complex(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CharValue::Zero)
    }
}

#[derive(Debug, Clone)]
struct Component {
    prime: u64,
    prime_power: u64,
    exponent: u32,
    /// Order of the generator.
    order: u64,
    /// Generator as a unit modulo the full modulus.
    generator: u64,
    /// Discrete logarithm of each residue modulo `prime_power` (u32::MAX off the units).
    dlog: Arc<Vec<u32>>,
}

/// The unit group `(Z/qZ)*` with a fixed generator basis.
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    modulus: u64,
    components: Vec<Component>,
    totient: u64,
    exponent: u64,
}

const NO_LOG: u32 = u32::MAX;

impl CharacterGroup {
    pub fn new(modulus: u64) -> Result<Arc<Self>> {
        if modulus == 0 {
            return Err(Error::Domain("character modulus must be positive".into()));
        }
        let f = factorize(modulus)?;
        let mut components = Vec::new();
        for &(p, e) in f.factors() {
            let pe = p.pow(e);
            let cofactor = modulus / pe;
            // CRT lift: g mod p^e, 1 mod the cofactor.
            let lift = |g: u64| -> u64 {
                if cofactor == 1 {
                    return g % pe;
                }
                let inv = inverse_mod(cofactor % pe, pe);
                // x = 1 + cofactor * t with t = (g - 1) / cofactor mod p^e
                let t = ((g + pe - 1) % pe) as u128 * inv as u128 % pe as u128;
                (1 + cofactor as u128 * t) as u64 % modulus
            };
            if p == 2 {
                if e == 2 {
                    let dlog: Vec<u32> = (0..4).map(|r| match r { 1 => 0, 3 => 1, _ => NO_LOG }).collect();
                    components.push(Component {
                        prime: 2,
                        prime_power: 4,
                        exponent: 2,
                        order: 2,
                        generator: lift(3),
                        dlog: Arc::new(dlog),
                    });
                } else if e >= 3 {
                    let half = pe / 4; // order of 5
                    let mut log5 = vec![NO_LOG; pe as usize];
                    let mut x = 1u64;
                    for k in 0..half {
                        log5[x as usize] = k as u32;
                        x = x * 5 % pe;
                    }
                    let mut sign_log = vec![NO_LOG; pe as usize];
                    let mut five_log = vec![NO_LOG; pe as usize];
                    for r in (1..pe).step_by(2) {
                        let (s, u) = if r % 4 == 1 { (0, r) } else { (1, pe - r) };
                        sign_log[r as usize] = s;
                        five_log[r as usize] = log5[u as usize];
                    }
                    components.push(Component {
                        prime: 2,
                        prime_power: pe,
                        exponent: e,
                        order: 2,
                        generator: lift(pe - 1),
                        dlog: Arc::new(sign_log),
                    });
                    components.push(Component {
                        prime: 2,
                        prime_power: pe,
                        exponent: e,
                        order: half,
                        generator: lift(5),
                        dlog: Arc::new(five_log),
                    });
                }
            } else {
                let mut g = primitive_root_mod_prime(p);
                if e >= 2 && mod_pow(g, p - 1, p * p) == 1 {
                    g += p;
                }
                let order = (p - 1) * p.pow(e - 1);
                let mut dlog = vec![NO_LOG; pe as usize];
                let mut x = 1u64;
                for k in 0..order {
                    dlog[x as usize] = k as u32;
                    x = (x as u128 * g as u128 % pe as u128) as u64;
                }
                components.push(Component {
                    prime: p,
                    prime_power: pe,
                    exponent: e,
                    order,
                    generator: lift(g),
                    dlog: Arc::new(dlog),
                });
            }
        }
        let exponent = components.iter().fold(1u64, |acc, c| acc.lcm(&c.order));
        Ok(Arc::new(CharacterGroup {
            modulus,
            totient: f.totient(),
            components,
            exponent,
        }))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `phi(q)`, the group order.
    pub fn order(&self) -> u64 {
        self.totient
    }

    /// Orders of the basis generators.
    pub fn generator_orders(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.order).collect()
    }

    /// Basis generators as residues modulo `q`.
    pub fn generators(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.generator).collect()
    }

    /// Exponent of the group (lcm of generator orders).
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Discrete logs of `n` against the basis, or `None` if `gcd(n, q) > 1`.
    pub fn discrete_log(&self, n: i64) -> Option<Vec<u64>> {
        let r = n.rem_euclid(self.modulus as i64) as u64;
        if gcd(r, self.modulus) != 1 {
            return None;
        }
        Some(
            self.components
                .iter()
                .map(|c| c.dlog[(r % c.prime_power) as usize] as u64)
                .collect(),
        )
    }

    /// The `index`-th character in lexicographic exponent-vector order.
    pub fn character(self: &Arc<Self>, index: u64) -> Result<DirichletCharacter> {
        if index >= self.totient {
            return Err(Error::Domain(format!(
                "character index {index} out of range: there are {} characters mod {}",
                self.totient, self.modulus
            )));
        }
        let mut rest = index;
        let mut exps = vec![0u64; self.components.len()];
        for (i, c) in self.components.iter().enumerate().rev() {
            exps[i] = rest % c.order;
            rest /= c.order;
        }
        Ok(DirichletCharacter::from_exponents(Arc::clone(self), exps))
    }

    pub fn principal(self: &Arc<Self>) -> DirichletCharacter {
        DirichletCharacter::from_exponents(Arc::clone(self), vec![0; self.components.len()])
    }

    /// All `phi(q)` characters in lexicographic exponent-vector order.
    pub fn characters(self: &Arc<Self>) -> Vec<DirichletCharacter> {
        (0..self.totient)
            .map(|i| self.character(i).expect("index in range"))
            .collect()
    }
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "{a} not invertible mod {m}");
    t.rem_euclid(m as i128) as u64
}

/// A Dirichlet character, stored as exponents against its group's basis.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<CharacterGroup>,
    exponents: Vec<u64>,
    order: u64,
    conductor: u64,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.group.modulus)
            .field("exponents", &self.exponents)
            .field("order", &self.order)
            .field("conductor", &self.conductor)
            .finish()
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi mod {} {:?}", self.group.modulus, self.exponents)
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl std::hash::Hash for DirichletCharacter {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.group.modulus.hash(state);
        self.exponents.hash(state);
    }
}

impl DirichletCharacter {
    fn from_exponents(group: Arc<CharacterGroup>, exponents: Vec<u64>) -> Self {
        let order = group
            .components
            .iter()
            .zip(&exponents)
            .fold(1u64, |acc, (c, &a)| acc.lcm(&(c.order / gcd(a, c.order))));
        let conductor = local_conductor(&group.components, &exponents);
        DirichletCharacter {
            group,
            exponents,
            order,
            conductor,
        }
    }

    /// The principal character modulo `q`.
    pub fn principal(q: u64) -> Result<Self> {
        Ok(CharacterGroup::new(q)?.principal())
    }

    /// The character `chi:<q>:<index>`.
    pub fn from_index(q: u64, index: u64) -> Result<Self> {
        CharacterGroup::new(q)?.character(index)
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn group(&self) -> &Arc<CharacterGroup> {
        &self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.group.modulus
    }

    /// Lexicographic position within [`characters_mod`].
    pub fn index(&self) -> u64 {
        self.group
            .components
            .iter()
            .zip(&self.exponents)
            .fold(0, |acc, (c, &a)| acc * c.order + a)
    }

    /// Exact value at `n`.
    pub fn value(&self, n: i64) -> CharValue {
        match self.group.discrete_log(n) {
            None => CharValue::Zero,
            Some(logs) => {
                let big = self.group.exponent();
                let mut acc = 0u128;
                for ((c, &a), &l) in self.group.components.iter().zip(&self.exponents).zip(&logs) {
                    acc += a as u128 * l as u128 * (big / c.order) as u128;
                }
                CharValue::Root(RootOfUnity::new((acc % big as u128) as u64, big))
            }
        }
    }

    /// Complex value at `n`.
    pub fn evaluate(&self, n: i64) -> Complex64 {
        self.value(n).to_complex()
    }

    /// `chi(-1) = 1`.
    pub fn is_even(&self) -> bool {
        self.group.modulus <= 2 || self.value(-1) == CharValue::Root(RootOfUnity::one())
    }

    /// 0 for even characters, 1 for odd ones.
    pub fn parity(&self) -> u8 {
        if self.is_even() {
            0
        } else {
            1
        }
    }

    pub fn conj(&self) -> Self {
        let exps = self
            .group
            .components
            .iter()
            .zip(&self.exponents)
            .map(|(c, &a)| (c.order - a) % c.order)
            .collect();
        DirichletCharacter::from_exponents(Arc::clone(&self.group), exps)
    }

    /// Pointwise product. Characters of different moduli are first induced
    /// to the lcm of the moduli.
    pub fn mul(&self, other: &Self) -> Self {
        if self.group.modulus != other.group.modulus {
            let m = self.group.modulus.lcm(&other.group.modulus);
            let a = self.induce(m).expect("lcm is a multiple");
            let b = other.induce(m).expect("lcm is a multiple");
            return a.mul(&b);
        }
        let exps = self
            .group
            .components
            .iter()
            .zip(self.exponents.iter().zip(&other.exponents))
            .map(|(c, (&a, &b))| (a + b) % c.order)
            .collect();
        DirichletCharacter::from_exponents(Arc::clone(&self.group), exps)
    }

    pub fn pow(&self, k: u64) -> Self {
        let exps = self
            .group
            .components
            .iter()
            .zip(&self.exponents)
            .map(|(c, &a)| ((a as u128 * k as u128) % c.order as u128) as u64)
            .collect();
        DirichletCharacter::from_exponents(Arc::clone(&self.group), exps)
    }

    /// The character modulo `m` (a multiple of the modulus) induced by `self`.
    pub fn induce(&self, m: u64) -> Result<Self> {
        if m == 0 || m % self.group.modulus != 0 {
            return Err(Error::Domain(format!(
                "cannot induce a character mod {} to modulus {m}",
                self.group.modulus
            )));
        }
        if m == self.group.modulus {
            return Ok(self.clone());
        }
        let target = CharacterGroup::new(m)?;
        self.transport(&target)
    }

    /// Re-expresses the values of `self` on the generators of `target`.
    /// The caller guarantees that the result is well defined.
    fn transport(&self, target: &Arc<CharacterGroup>) -> Result<Self> {
        let q = self.group.modulus;
        let d = target.modulus;
        let mut exps = Vec::with_capacity(target.components.len());
        for c in &target.components {
            // A representative of the generator class mod d that is a unit mod q.
            let mut n = c.generator;
            while gcd(n, q) != 1 {
                n += d;
            }
            let v = match self.value(n as i64) {
                CharValue::Root(r) => r,
                CharValue::Zero => unreachable!("representative is a unit"),
            };
            let scaled = v.exponent as u128 * c.order as u128;
            if scaled % v.order as u128 != 0 {
                return Err(Error::Domain(format!(
                    "character mod {q} does not factor through modulus {d}"
                )));
            }
            exps.push((scaled / v.order as u128) as u64 % c.order);
        }
        Ok(DirichletCharacter::from_exponents(Arc::clone(target), exps))
    }

    /// The primitive character inducing `self`, living modulo the conductor.
    pub fn primitivize(&self) -> Self {
        if self.is_primitive() {
            return self.clone();
        }
        let target = CharacterGroup::new(self.conductor).expect("conductor is positive");
        self.transport(&target).expect("conductor is where the character factors")
    }
}

/// Conductor from the local exponents, one prime power at a time.
fn local_conductor(components: &[Component], exps: &[u64]) -> u64 {
    let mut conductor = 1u64;
    let mut i = 0;
    while i < components.len() {
        let c = &components[i];
        if c.prime == 2 && c.exponent >= 3 {
            let sign = exps[i];
            let five = exps[i + 1];
            let five_order = components[i + 1].order;
            let f = if five != 0 {
                // kernel contains 1 + 2^f Z iff 2^{e-f} | five
                let v = five.trailing_zeros().min(five_order.trailing_zeros());
                c.exponent - v
            } else if sign != 0 {
                2
            } else {
                0
            };
            conductor *= 2u64.pow(f);
            i += 2;
            continue;
        }
        let a = exps[i];
        if a != 0 {
            let f = if c.prime == 2 {
                2
            } else {
                let mut v = 0u32;
                let mut x = a;
                while x % c.prime == 0 && v < c.exponent - 1 {
                    x /= c.prime;
                    v += 1;
                }
                c.exponent - v
            };
            conductor *= c.prime.pow(f);
        }
        i += 1;
    }
    conductor
}

/// All characters modulo `q`, principal first.
pub fn characters_mod(q: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(CharacterGroup::new(q)?.characters())
}

/// Primitive characters modulo `q`.
pub fn primitive_characters_mod(q: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(characters_mod(q)?.into_iter().filter(|c| c.is_primitive()).collect())
}

/// `sum_{chi mod q} conj(chi(a)) chi(n)`: `phi(q)` when `n = a (mod q)`
/// and `n` is a unit, else zero.
pub fn orthogonality_sum(q: u64, a: i64, n: i64) -> Result<Complex64> {
    let group = CharacterGroup::new(q)?;
    if group.discrete_log(a).is_none() {
        return Err(Error::Domain(format!("gcd({a}, {q}) > 1")));
    }
    Ok(group
        .characters()
        .iter()
        .map(|chi| chi.evaluate(a).conj() * chi.evaluate(n))
        .sum())
}

//! Rankin–Selberg pairs and their coefficient streams.
//!
//! At an unramified prime the local parameters of `pi x pi'` are the `n n'`
//! products `alpha_j alpha'_j'`. Isobaric sums are expanded component by
//! component. For each component pair the GL(1) content of both sides (the
//! character twists, and the base character of a GL(1) component) is
//! multiplied and replaced by the primitive character inducing the product,
//! and the two real twists add. At primes where that character or a
//! newform level ramifies, the products of the available (zero-padded)
//! parameters stand in for the true local factor.

mod auxiliary;
mod bounds;
mod dd;
mod stream;

use std::fmt;

use num_complex::Complex64;

use crate::automorphic::{AutomorphicRep, PlaceType, RepKind};
use crate::characters::DirichletCharacter;
use crate::error::Result;

pub use auxiliary::{auxiliary_product, conductor_q, AuxiliaryFactor, AuxiliaryProduct};
pub use bounds::{
    check_decoupling, check_local_bounds, check_log_derivative, DecouplingReport, DecouplingViolation,
    LocalBoundReport, LogDerivativeReport,
};
pub use stream::{
    dirichlet_convolve, euler_product_eval, rs_biglambda_terms, rs_stream, CoefficientStream,
};

/// One component pair of an expanded Rankin–Selberg product.
#[derive(Debug, Clone)]
struct Block {
    left: AutomorphicRep,
    right: AutomorphicRep,
    /// Primitive GL(1) content of the pair, `None` when trivial.
    content: Option<DirichletCharacter>,
    /// `t_left + t_right`.
    real_twist: f64,
}

impl Block {
    fn new(left: &AutomorphicRep, right: &AutomorphicRep) -> Self {
        let content = match (left.character_content(), right.character_content()) {
            (None, None) => None,
            (Some(c), None) | (None, Some(c)) => Some(c),
            (Some(a), Some(b)) => Some(a.mul(&b).primitivize()),
        };
        let content = content.filter(|c| c.modulus() > 1);
        Block {
            left: left.clone(),
            right: right.clone(),
            content,
            real_twist: left.real_twist() + right.real_twist(),
        }
    }

    fn is_zeta(&self) -> bool {
        self.content.is_none()
            && self.real_twist == 0.0
            && matches!(self.left.kind(), RepKind::Character(_))
            && matches!(self.right.kind(), RepKind::Character(_))
    }

    fn push_parameters(&self, p: u64, out: &mut Vec<Complex64>) -> Result<()> {
        let a = self.left.core_parameters(p)?;
        let b = self.right.core_parameters(p)?;
        let chi = self.content.as_ref().map_or(Complex64::new(1.0, 0.0), |c| c.evaluate(p as i64));
        let factor = if self.real_twist == 0.0 {
            chi
        } else {
            chi * Complex64::from_polar(1.0, -self.real_twist * (p as f64).ln())
        };
        for x in &a {
            for y in &b {
                out.push(x * y * factor);
            }
        }
        Ok(())
    }
}

/// `pi x pi'` for supported `pi`, `pi'`.
#[derive(Debug, Clone)]
pub struct RSPair {
    left: AutomorphicRep,
    right: AutomorphicRep,
    blocks: Vec<Block>,
}

impl RSPair {
    pub fn new(left: AutomorphicRep, right: AutomorphicRep) -> Self {
        let mut blocks = Vec::new();
        for l in left.components() {
            for r in right.components() {
                blocks.push(Block::new(l, r));
            }
        }
        RSPair { left, right, blocks }
    }

    pub fn left(&self) -> &AutomorphicRep {
        &self.left
    }

    pub fn right(&self) -> &AutomorphicRep {
        &self.right
    }

    /// `n n'`.
    pub fn degree(&self) -> usize {
        self.left.degree() * self.right.degree()
    }

    /// `theta_n + theta_n'`.
    pub fn theta_bound(&self) -> f64 {
        self.left.theta_bound() + self.right.theta_bound()
    }

    /// Largest prime at which both sides have local data.
    pub fn data_limit(&self) -> u64 {
        self.left.data_limit().min(self.right.data_limit())
    }

    /// True when every block is `zeta` itself.
    pub fn is_zeta(&self) -> bool {
        self.blocks.iter().all(Block::is_zeta)
    }

    /// The `n n'` local parameters at `p`.
    pub fn combined_parameters(&self, p: u64) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(self.degree());
        for b in &self.blocks {
            b.push_parameters(p, &mut out)?;
        }
        Ok(out)
    }

    /// `(pi x pi')~ = pi~ x pi'~`.
    pub fn contragredient(&self) -> Self {
        RSPair::new(self.left.contragredient(), self.right.contragredient())
    }

    /// Stand-in arithmetic conductor `N^{n'} N'^{n}`.
    pub fn conductor(&self) -> f64 {
        (self.left.conductor() as f64).powi(self.right.degree() as i32)
            * (self.right.conductor() as f64).powi(self.left.degree() as i32)
    }

    /// Archimedean parameters `mu_j + mu'_j'` over the real-type expansions
    /// of both sides.
    pub fn archimedean(&self) -> Result<Vec<Complex64>> {
        let a = real_type_mu(&self.left)?;
        let b = real_type_mu(&self.right)?;
        Ok(a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect())
    }

    /// `C(it, pi x pi') = N prod_{j,j'} (|mu_j + mu'_j' + it| + 3)`.
    pub fn analytic_conductor(&self, t: f64) -> Result<f64> {
        let it = Complex64::new(0.0, t);
        let arch: f64 = self.archimedean()?.iter().map(|m| (m + it).norm() + 3.0).product();
        Ok(self.conductor() * arch)
    }

    /// Primes where some block is ramified: divisors of either conductor,
    /// of a character modulus, or of a block's combined character.
    pub fn ramified_primes(&self) -> Vec<u64> {
        let mut ps = self.left.ramified_primes();
        ps.extend(self.right.ramified_primes());
        for b in &self.blocks {
            if let Some(c) = &b.content {
                if let Ok(f) = crate::arith::factorize(c.modulus()) {
                    ps.extend(f.primes());
                }
            }
        }
        ps.sort_unstable();
        ps.dedup();
        ps
    }
}

impl fmt::Display for RSPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x {}", self.left, self.right)
    }
}

fn real_type_mu(rep: &AutomorphicRep) -> Result<Vec<Complex64>> {
    let a = rep.archimedean()?;
    let mut out = Vec::with_capacity(a.mu.len());
    for (mu, kind) in a.mu.iter().zip(&a.kinds) {
        out.push(*mu);
        if *kind == PlaceType::Complex {
            out.push(mu + 1.0);
        }
    }
    Ok(out)
}

/// `pi x (pi' (x) chi (x) |det|^{it})`.
pub fn twisted_pair(pair: &RSPair, chi: &DirichletCharacter, t: f64) -> RSPair {
    RSPair::new(pair.left.clone(), pair.right.twist(chi, t))
}

#[cfg(test)]
mod tests;

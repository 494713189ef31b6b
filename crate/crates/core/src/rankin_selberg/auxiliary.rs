use num_complex::Complex64;

use super::dd::DdComplex;
use super::stream::{dirichlet_convolve_dd, rs_lambda_dd, rs_stream, CoefficientStream};
use super::RSPair;
use crate::automorphic::AutomorphicRep;
use crate::characters::DirichletCharacter;
use crate::error::Result;

/// One Rankin–Selberg factor of `D(s)` and how often it occurs.
#[derive(Debug, Clone)]
pub struct AuxiliaryFactor {
    pub pair: RSPair,
    pub multiplicity: u32,
    pub stream: CoefficientStream,
}

/// `D(s) = L(s, Pi x Pi~)` for `Pi = pi [+] pi(x)chi [+] pi'~ [+] pi'~(x)chi-bar`,
/// kept both as its twelve factors and as the single isobaric pair.
#[derive(Debug, Clone)]
pub struct AuxiliaryProduct {
    factors: Vec<AuxiliaryFactor>,
    isobaric: RSPair,
    stream: CoefficientStream,
}

impl AuxiliaryProduct {
    pub fn factors(&self) -> &[AuxiliaryFactor] {
        &self.factors
    }

    /// Total number of factors counted with multiplicity (16).
    pub fn factor_count(&self) -> u32 {
        self.factors.iter().map(|f| f.multiplicity).sum()
    }

    /// `Pi x Pi~`.
    pub fn isobaric_pair(&self) -> &RSPair {
        &self.isobaric
    }

    /// `lambda_D` by Dirichlet convolution of the factor streams and
    /// `Lambda_D` as their sum.
    pub fn stream(&self) -> &CoefficientStream {
        &self.stream
    }

    /// `lambda_D`, `Lambda_D` expanded directly from the concatenated
    /// parameters of `Pi x Pi~`.
    pub fn direct_stream(&self) -> Result<CoefficientStream> {
        rs_stream(&self.isobaric, self.stream.limit())
    }
}

/// Builds `D(s)` for `(pi, pi', chi)` with streams to `limit`.
pub fn auxiliary_product(
    pi: &AutomorphicRep,
    pi2: &AutomorphicRep,
    chi: &DirichletCharacter,
    limit: usize,
) -> Result<AuxiliaryProduct> {
    let chi = chi.primitivize();
    let chi_bar = chi.conj();
    let chi2 = chi.pow(2);
    let chi_bar2 = chi_bar.pow(2);
    let pi_d = pi.contragredient();
    let pi2_d = pi2.contragredient();

    let spec: [(&AutomorphicRep, AutomorphicRep, u32); 12] = [
        (pi, pi_d.clone(), 2),
        (pi2, pi2_d.clone(), 2),
        (pi, pi2.twist_by_character(&chi), 2),
        (&pi_d, pi2_d.twist_by_character(&chi_bar), 2),
        (pi, pi_d.twist_by_character(&chi), 1),
        (pi2, pi2_d.twist_by_character(&chi), 1),
        (&pi_d, pi2_d.clone(), 1),
        (pi, pi2.twist_by_character(&chi2), 1),
        (pi, pi_d.twist_by_character(&chi_bar), 1),
        (pi2, pi2_d.twist_by_character(&chi_bar), 1),
        (pi, pi2.clone(), 1),
        (&pi_d, pi2_d.twist_by_character(&chi_bar2), 1),
    ];

    let mut factors = Vec::with_capacity(spec.len());
    for (left, right, multiplicity) in spec {
        let pair = RSPair::new(left.clone(), right);
        let stream = rs_stream(&pair, limit)?;
        factors.push(AuxiliaryFactor {
            pair,
            multiplicity,
            stream,
        });
    }

    // the convolution runs in double-double: lambda_D(n) is often a sum of
    // large terms cancelling to (nearly) zero
    let zero = Complex64::new(0.0, 0.0);
    let mut lambda = vec![DdComplex::ZERO; limit + 1];
    lambda[1] = DdComplex::ONE;
    let mut biglambda = vec![zero; limit + 1];
    for f in &factors {
        let factor_lambda = rs_lambda_dd(&f.pair, limit)?;
        for _ in 0..f.multiplicity {
            lambda = dirichlet_convolve_dd(&lambda, &factor_lambda);
            for (acc, b) in biglambda.iter_mut().zip(f.stream.biglambdas()) {
                *acc += b;
            }
        }
    }
    let lambda: Vec<Complex64> = lambda.iter().map(DdComplex::round).collect();

    let big_pi = AutomorphicRep::isobaric(vec![
        pi.clone(),
        pi.twist_by_character(&chi),
        pi2_d.clone(),
        pi2_d.twist_by_character(&chi_bar),
    ])?;
    let isobaric = RSPair::new(big_pi.clone(), big_pi.contragredient());
    let label = format!("D[{pi}, {pi2}, {chi}]");
    Ok(AuxiliaryProduct {
        factors,
        isobaric,
        stream: CoefficientStream::from_parts(label, lambda, biglambda)?,
    })
}

/// `Q = (C(pi) C(pi'))^{2(n + n')} C(chi)^{(n + n')^2}` with analytic
/// conductors at `t = 0`.
pub fn conductor_q(pi: &AutomorphicRep, pi2: &AutomorphicRep, chi: &DirichletCharacter) -> Result<f64> {
    let n = (pi.degree() + pi2.degree()) as i32;
    let c_pi = pi.analytic_conductor(0.0)?;
    let c_pi2 = pi2.analytic_conductor(0.0)?;
    let c_chi = AutomorphicRep::character(chi.primitivize()).analytic_conductor(0.0)?;
    Ok((c_pi * c_pi2).powi(2 * n) * c_chi.powi(n * n))
}

//! Gamma functions, Dirichlet series right of `Re(s) = 1`, the ramp kernel
//! and its Mellin transform, Taylor jets with the residue extractor, and
//! adaptive quadrature along vertical lines.

mod dirichlet;
mod gamma;
mod jet;
mod mellin;
mod quadrature;

pub use dirichlet::{dirichlet_eval, smoothed_sum, DirichletValue, TailModel};
pub use gamma::{complex_gamma, gamma_v, ln_gamma};
pub use jet::{residue_extract, TaylorJet};
pub use mellin::{mellin_phi, mellin_phi_hat, SmoothingKernel};
pub use quadrature::{integrate, integrate_vertical, QuadratureResult, MAX_INTERVALS};

#[cfg(test)]
mod tests;

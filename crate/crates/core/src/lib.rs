//! Desk-scale engine for twisted Rankin–Selberg L-functions over the
//! rationals.
//!
//! The crate is organised bottom-up:
//!
//! - [`arith`]: sieves, factorization, exact power series, `tau(n)`
//! - [`characters`]: Dirichlet characters, conductors, orthogonality
//! - [`automorphic`]: representations and their local data
//! - [`rankin_selberg`]: coefficient streams, the auxiliary product, bounds
//! - [`analytic`]: Gamma, Dirichlet series, smoothing, residues, quadrature
//! - [`prime_counting`]: prime sums in progressions and their error terms
//! - [`verify`]: the invariant suites behind `rankin verify`

pub mod analytic;
pub mod arith;
pub mod automorphic;
pub mod characters;
pub mod prime_counting;
pub mod rankin_selberg;
pub mod verify;
mod error;

pub use error::{Error, Result};
pub use num_complex::{self, Complex64};

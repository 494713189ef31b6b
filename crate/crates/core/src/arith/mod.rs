//! Integer substrate: prime sieving, factorization, exact power series and
//! the Ramanujan `tau` table backing the built-in weight-12 newform.

mod factor;
pub(crate) mod ntt;
mod series;
mod sieve;
mod tau;

pub use factor::{
    euler_phi, factorize, gcd, is_prime, mod_pow, primitive_root_mod_prime, FactoredInteger,
};
pub use series::{euler_product_series, jacobi_cube_series, IntegerSeries};
pub use sieve::{integer_sqrt, prime_powers, sieve_primes, FactorTable};
pub use tau::{check_tau, check_tau_factored, divisor_power_sum, ramanujan_tau, TauCheck, TauTable};

//! Exact and asymptotic evaluation of `S(x) = sum over 2 <= n <= x of 1/m(n)`,
//! where `m(n)` is the middle prime factor of `n`: the median of the prime
//! factors of `n` listed either without multiplicity (`CountMode::Omega`) or
//! with multiplicity (`CountMode::BigOmega`).
//!
//! The exact side enumerates factorizations with a segmented sieve and reports
//! the local law (how often each prime is the middle one). The asymptotic side
//! implements the saddle-point machinery that governs the distinct-factor sum
//! (the saddle parameter `rho`, truncated Euler products, and the polynomial
//! expansions of `rho` and of `log S`), and the residue expansion with
//! constants `c_j` that governs the with-multiplicity sum.

use serde::{Deserialize, Serialize};

pub mod dd;
pub mod exact;
pub mod primes;
pub mod products;
pub mod saddle;
pub mod series;
pub mod sieve;
pub mod specfun;

pub use exact::{
    exact_sum, exact_sum_with, factorize, lambda_big_omega_exact, local_law, middle_prime,
    phi_k_exact, rough_power_sum_exact, ExactSumReport, Factorization,
};
pub use products::{ProductError, TailBound};
pub use saddle::{SaddleError, SaddleState};
pub use sieve::{for_each_factored, SegmentConfig, SieveError};

/// How repeated prime factors of an integer are counted: `Omega` sees each
/// prime once, `BigOmega` keeps multiplicity. The same split selects between
/// the two Euler-product families and the two middle-factor conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    Omega,
    BigOmega,
}

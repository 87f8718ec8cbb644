//! Special functions backing the asymptotic side: exponential and logarithmic
//! integrals, the complex gamma function, even zeta values as exact rationals
//! times powers of pi^2, generalized incomplete gamma integrals, and the
//! truncated expansions of the two logarithmic integrals that appear in tail
//! and head estimates.

mod ei;
mod gamma;
mod incgamma;
mod logint;
pub mod quad;
mod zeta;

pub use ei::{ei, li, li_offset};
pub use gamma::{gamma_complex, gamma_real};
pub use incgamma::{gen_inc_gamma_numeric, gen_inc_gamma_ratio, gen_inc_gamma_saddle};
pub use logint::{log_integral_head, log_integral_tail, ExpansionPair};
pub use quad::{integrate, integrate_real, QuadResult};
pub use zeta::{bernoulli, zeta_even, zeta_even_exact};

//! Exact formal-series machinery over the coefficient ring Q[Lambda, Pi].
//!
//! Lambda stands for log 2 and Pi for pi^2; every cascade stays inside this
//! ring, so the polynomial families R_j and P_j come out as exact rationals
//! attached to monomials Lambda^a Pi^b. Floating point enters only when a
//! caller substitutes numeric values.

mod biseries;
mod cascade;
mod coeffs;
mod sympoly;

pub use biseries::{binom_rat, series_ops, BiSeries, SeriesOp};
pub use cascade::{
    cascade_p, cascade_r, lagrange_an, Family, PolyCoeffJson, PolyFamily, PolyJson,
    CASCADE_DEPTH_MAX,
};
pub use coeffs::{alpha_coeff, alpha_even_exact, beta_gamma_fraka, fraka1, fraka_exact, CoeffValue};
pub use sympoly::SymPoly;

//! The saddle-point side of the evaluation: the implicit parameter `rho`
//! balancing `xi/v^2` against the shifted-prime sum, the integral `I(v)` and
//! its root `nu`, polynomial expansions of `rho` and of `log S`, the main
//! term for the distinct-factor sum, its local scaling law, main terms for
//! rough-integer counts and power sums, and the residue expansion for the
//! with-multiplicity sum.
//!
//! `xi` always means `log log x`, and every operation that can accepts `xi`
//! directly, so regimes far beyond any storable `x` stay testable.

use crate::primes::{shared_table, PrimeTableError};
use crate::products::{constant_c, f_finite, g_small, nth_prime, ProductError};
use crate::series::{alpha_even_exact, cascade_p, cascade_r, fraka_exact, PolyFamily, CASCADE_DEPTH_MAX};
use crate::specfun::{gamma_complex, gamma_real, integrate_real};
use crate::CountMode;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, LN_2};
use std::sync::OnceLock;
use thiserror::Error;

/// Largest prime bound the strict psi sum will sieve to.
pub const PSI_STRICT_PRIME_LIMIT: f64 = 1e8;
/// Primes below this bound enter psi exactly; beyond it the sum continues as
/// the integral of the same summand against the density `1 / log t`.
pub const PSI_EXACT_CUT: f64 = 1e6;
/// Default relative bracket width for the implicit-parameter solvers.
pub const SOLVER_TOL: f64 = 1e-12;
/// Relative tolerance for the internal quadratures.
pub const QUAD_REL_TOL: f64 = 1e-10;
/// Below this `x` the main-term evaluators flag their output as outside the
/// reference regime (still computed).
pub const X_REFERENCE: f64 = 1e7;
/// Requested absolute accuracy for the residue constants in the
/// with-multiplicity expansion.
const C_EXPANSION_TOL: f64 = 5e-6;

#[derive(Debug, Error)]
pub enum SaddleError {
    #[error("strict prime sum at v = {v} needs primes up to {required:.3e}; the table stops at {limit:.1e}")]
    TableTooSmall { v: f64, required: f64, limit: f64 },
    #[error("psi has no sign change on [{lo}, {hi}]: psi(lo) = {psi_lo}, psi(hi) = {psi_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        psi_lo: f64,
        psi_hi: f64,
    },
    #[error("expansion order {requested} exceeds the computed cascade depth {available}")]
    OrderTooLarge { requested: usize, available: usize },
    #[error("domain violation: {condition}")]
    Domain { condition: String },
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    PrimeTable(#[from] PrimeTableError),
}

fn domain(condition: String) -> SaddleError {
    SaddleError::Domain { condition }
}

/// Solved saddle data at one scale. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddleState {
    /// `exp(exp(xi))`; saturates to infinity for synthetic `xi`.
    #[serde(with = "saturating_x")]
    pub x: f64,
    pub xi: f64,
    /// `inf { v > 0 : psi(xi, v) <= 0 }`, the left end of the final bracket.
    pub rho: f64,
    /// Root of `v^2 I(v) = xi`.
    pub nu: f64,
    /// `sqrt(2 xi / log xi)`, the first-order scale of both `rho` and `nu`.
    pub mu: f64,
    pub psi_at_rho: f64,
    pub bracket: (f64, f64),
}

/// JSON has no infinity, so a saturated `x` travels as `null` and comes
/// back as infinity; finite values round-trip unchanged.
mod saturating_x {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_some(x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// `sum over primes q < bound of 1 / (q - 1 + v)`, strict at the boundary.
fn prime_sum_shifted(bound: f64, v: f64) -> Result<f64, PrimeTableError> {
    if bound <= 2.0 {
        return Ok(0.0);
    }
    // q < bound over integers q is q <= ceil(bound) - 1.
    let cut = bound.ceil() as u64 - 1;
    let table = shared_table(cut)?;
    let mut acc = 0.0;
    for &q in table.primes_upto(cut).iter().rev() {
        acc += 1.0 / (q as f64 - 1.0 + v);
    }
    Ok(acc)
}

/// `psi(xi, v) = xi / v^2 - sum over q < e^v of 1 / (q - 1 + v)` with the
/// prime sum taken literally; errors when that would need primes beyond
/// `PSI_STRICT_PRIME_LIMIT`.
pub fn psi(xi: f64, v: f64) -> Result<f64, SaddleError> {
    assert!(v > 0.0 && xi > 0.0, "psi needs v > 0 and xi > 0");
    let bound = v.exp();
    if bound > PSI_STRICT_PRIME_LIMIT {
        return Err(SaddleError::TableTooSmall {
            v,
            required: bound,
            limit: PSI_STRICT_PRIME_LIMIT,
        });
    }
    Ok(xi / (v * v) - prime_sum_shifted(bound, v)?)
}

/// `psi` with the prime sum beyond `PSI_EXACT_CUT` replaced by the integral
/// of `1 / ((t - 1 + v) log t)`; identical to the strict form while
/// `e^v` stays below the cut, smooth and strictly decreasing beyond it.
pub fn psi_hybrid(xi: f64, v: f64) -> f64 {
    assert!(v > 0.0 && xi > 0.0, "psi needs v > 0 and xi > 0");
    let bound = v.exp().min(PSI_EXACT_CUT);
    let mut sum = prime_sum_shifted(bound, v).expect("exact cut stays within the table limit");
    let lo = PSI_EXACT_CUT.ln();
    if v > lo {
        // In u = log t the integrand is 1 / (u (1 + (v - 1) e^{-u})).
        sum += integrate_real(
            |u| 1.0 / (u * (1.0 + (v - 1.0) * (-u).exp())),
            lo,
            v,
            QUAD_REL_TOL,
            0.0,
        )
        .value
        .re;
    }
    xi / (v * v) - sum
}

/// Locates `rho = inf { v : psi(xi, v) <= 0 }` by sign bisection (psi jumps
/// at `log q`, so nothing here touches derivatives) inside the window
/// `[sqrt(xi/log xi), sqrt(5 xi/log xi)]`, geometrically widened if the sign
/// condition fails at an end. Also solves for `nu`.
pub fn solve_rho(xi: f64, tol: f64) -> Result<SaddleState, SaddleError> {
    if !(xi > E) {
        return Err(domain(format!("solve_rho needs xi > e, got {xi}")));
    }
    assert!(tol > 0.0);
    let lxi = xi.ln();
    let mut lo = (xi / lxi).sqrt();
    let mut hi = (5.0 * xi / lxi).sqrt();
    let mut psi_lo = psi_hybrid(xi, lo);
    let mut psi_hi = psi_hybrid(xi, hi);
    for _ in 0..8 {
        if psi_lo > 0.0 {
            break;
        }
        lo *= 0.5;
        psi_lo = psi_hybrid(xi, lo);
    }
    for _ in 0..8 {
        if psi_hi <= 0.0 {
            break;
        }
        hi *= 2.0;
        psi_hi = psi_hybrid(xi, hi);
    }
    if psi_lo <= 0.0 || psi_hi > 0.0 {
        return Err(SaddleError::NoSignChange {
            lo,
            hi,
            psi_lo,
            psi_hi,
        });
    }
    while hi - lo > tol * lo {
        let mid = 0.5 * (lo + hi);
        if psi_hybrid(xi, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // rho is an infimum, so the left end (psi still positive) is returned.
    Ok(SaddleState {
        x: xi.exp().exp(),
        xi,
        rho: lo,
        nu: solve_nu(xi, tol),
        mu: (2.0 * xi / lxi).sqrt(),
        psi_at_rho: psi_hybrid(xi, lo),
        bracket: (lo, hi),
    })
}

/// As `solve_rho`, for an actual `x` (so the state keeps the exact `x`).
pub fn solve_rho_for_x(x: f64, tol: f64) -> Result<SaddleState, SaddleError> {
    let mut state = solve_rho(x.ln().ln(), tol)?;
    state.x = x;
    Ok(state)
}

fn i_raw(v: f64) -> f64 {
    // integral over [2, e^v] of dt / ((t - 1 + v) log t); in u = log t the
    // integrand is 1 / (u (1 + (v - 1) e^{-u})), immune to overflow.
    integrate_real(
        |u| 1.0 / (u * (1.0 + (v - 1.0) * (-u).exp())),
        LN_2,
        v,
        QUAD_REL_TOL,
        0.0,
    )
    .value
    .re
}

/// `I(v) = integral over [2, e^v] of dt / ((t - 1 + v) log t)` by adaptive
/// quadrature after the substitution `t = e^u`.
pub fn i_numeric(v: f64) -> f64 {
    assert!(v >= 2.0, "the integral evaluator expects v >= 2");
    i_raw(v)
}

/// `log(v / log v) + sum over 1 <= j <= terms of alpha_{2j} / (log v)^{2j}`,
/// the expansion `I(v)` satisfies for large `v`.
pub fn i_asymptotic(v: f64, terms: usize) -> f64 {
    assert!(v >= 3.0, "the expansion needs log v > 1");
    let lv = v.ln();
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let mut acc = (v / lv).ln();
    let mut power = 1.0;
    for j in 1..=terms {
        power /= lv * lv;
        acc += alpha_even_exact(j).eval(LN_2, pi2) * power;
    }
    acc
}

/// Root of `v^2 I(v) = xi` on `[1, infinity)`; the left side is strictly
/// increasing there, so plain bisection applies.
pub fn solve_nu(xi: f64, tol: f64) -> f64 {
    let xi_min = 5.0_f64.ln().ln();
    assert!(xi >= xi_min, "nu equation needs xi >= log log 5");
    assert!(tol > 0.0);
    let f = |v: f64| v * v * i_raw(v) - xi;
    let mut lo = 1.0_f64;
    let mut hi = 2.0_f64.max((2.0 * xi / xi.ln().max(1.0)).sqrt());
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    while hi - lo > tol * lo {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

static R_FAMILY: OnceLock<PolyFamily> = OnceLock::new();
static P_FAMILY: OnceLock<PolyFamily> = OnceLock::new();

pub(crate) fn r_family() -> &'static PolyFamily {
    R_FAMILY.get_or_init(|| cascade_r(CASCADE_DEPTH_MAX))
}

pub(crate) fn p_family() -> &'static PolyFamily {
    P_FAMILY.get_or_init(|| cascade_p(CASCADE_DEPTH_MAX))
}

fn poly_series(fam: &PolyFamily, xi: f64, j_max: usize) -> Result<f64, SaddleError> {
    if j_max > fam.depth() {
        return Err(SaddleError::OrderTooLarge {
            requested: j_max,
            available: fam.depth(),
        });
    }
    let x_arg = xi.ln().ln();
    let sigma = 1.0 / xi.ln();
    let mut acc = 0.0;
    let mut power = 1.0;
    for j in 0..=j_max {
        acc += fam.eval(j, x_arg) * power;
        power *= sigma;
    }
    Ok(acc)
}

/// `sqrt(2 xi / log xi) * sum over 0 <= j <= j_max of R_j(log_2 xi) / (log xi)^j`,
/// the closed-form expansion of `rho`.
pub fn rho_expansion(xi: f64, j_max: usize) -> Result<f64, SaddleError> {
    if !(xi.ln().ln() >= 1.0) {
        return Err(domain(format!(
            "rho expansion needs log log xi >= 1, got xi = {xi}"
        )));
    }
    Ok((2.0 * xi / xi.ln()).sqrt() * poly_series(r_family(), xi, j_max)?)
}

/// `v {log(v/log v) + sum over 1 <= m <= terms of a_m / (log v)^m}`, the
/// expansion of `log F(e^v, v)` in distinct-factor mode; the bracket
/// coefficients `a_m` are exact elements of Q[Pi].
pub fn log_f_expansion(v: f64, terms: usize) -> f64 {
    assert!(v >= 3.0, "the expansion needs log v > 1");
    let lv = v.ln();
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let mut acc = (v / lv).ln();
    let mut power = 1.0;
    for m in 1..=terms {
        power /= lv;
        acc += fraka_exact(m).eval(LN_2, pi2) * power;
    }
    v * acc
}

/// `log F(e^v, v) = sum over q < e^v of log(1 + v/(q - 1))` with primes below
/// `PSI_EXACT_CUT` summed exactly and the rest integrated against the
/// density `1 / log t`; usable at `v` far beyond any enumerable `e^v`.
pub fn log_f_omega_hybrid(v: f64) -> f64 {
    assert!(v > 0.0);
    let bound = v.exp().min(PSI_EXACT_CUT);
    let mut acc = 0.0;
    if bound > 2.0 {
        let cut = bound.ceil() as u64 - 1;
        let table = shared_table(cut).expect("exact cut stays within the table limit");
        for &q in table.primes_upto(cut).iter().rev() {
            acc += (v / (q as f64 - 1.0)).ln_1p();
        }
    }
    let lo = PSI_EXACT_CUT.ln();
    if v > lo {
        // In u = log t: log(1 + v/(e^u - 1)) e^u / u, which is v/u once e^u
        // dwarfs v.
        acc += integrate_real(
            |u| {
                if u > 300.0 {
                    v / u
                } else {
                    let eu = u.exp();
                    (v / (eu - 1.0)).ln_1p() * eu / u
                }
            },
            lo,
            v,
            QUAD_REL_TOL,
            0.0,
        )
        .value
        .re;
    }
    acc
}

/// Main-term evaluation report; `below_reference_scale` marks inputs under
/// `X_REFERENCE`, where the asymptotic regime has not set in.
#[derive(Debug, Clone)]
pub struct MainTermReport {
    pub value: f64,
    pub state: SaddleState,
    pub below_reference_scale: bool,
}

/// Main term of the distinct-factor sum:
/// `x F(e^rho, rho) e^{-rho} / ((log x)^{1 - 1/rho} sqrt(2 xi))`.
pub fn s_omega_main_term(x: f64) -> Result<MainTermReport, SaddleError> {
    let state = solve_rho_for_x(x, SOLVER_TOL)?;
    let rho = state.rho;
    let f = f_finite(rho.exp(), Complex64::new(rho, 0.0), CountMode::Omega).re;
    let value = x * f * (-rho).exp() / (x.ln().powf(1.0 - 1.0 / rho) * (2.0 * state.xi).sqrt());
    Ok(MainTermReport {
        value,
        state,
        below_reference_scale: x < X_REFERENCE,
    })
}

/// `log(main term / (x / log x))` as a function of `xi` alone:
/// `log F(e^rho, rho) - rho + xi/rho - log sqrt(2 xi)`, with the product's
/// log taken in hybrid form so synthetic `xi` works.
pub fn log_s_omega_main_xi(xi: f64, tol: f64) -> Result<f64, SaddleError> {
    let state = solve_rho(xi, tol)?;
    let rho = state.rho;
    Ok(log_f_omega_hybrid(rho) - rho + xi / rho - 0.5 * (2.0 * xi).ln())
}

/// `sqrt(2 xi log xi) * sum over 0 <= j <= j_max of P_j(log_2 xi) / (log xi)^j`,
/// the expansion of `log(S(x) / (x / log x))` with `xi = log_2 x`.
pub fn log_s_omega_expansion_xi(xi: f64, j_max: usize) -> Result<f64, SaddleError> {
    if !(xi > E) {
        return Err(domain(format!(
            "log S expansion needs log log xi > 0, got xi = {xi}"
        )));
    }
    Ok((2.0 * xi * xi.ln()).sqrt() * poly_series(p_family(), xi, j_max)?)
}

/// The same expansion addressed by `x` itself (needs `log_4 x > 0`).
pub fn log_s_omega_expansion(x: f64, j_max: usize) -> Result<f64, SaddleError> {
    log_s_omega_expansion_xi(x.ln().ln(), j_max)
}

#[derive(Debug, Clone)]
pub struct ScalingPrediction {
    /// `x^h * main(x) / (1 + h)`, the predicted main term at `x^{1+h}`.
    pub predicted: f64,
    /// `rho at x^{1+h}` minus `rho at x`.
    pub rho_shift: f64,
    /// Whether `log(1+h)` is small against `sqrt(xi) / (log xi)^{3/2}`.
    pub h_within_corridor: bool,
}

/// Local scaling law: the main term at `x^{1+h}` predicted from the one at
/// `x` by the factor `x^h / (1 + h)`.
pub fn local_scaling_predict(x: f64, h: f64) -> Result<ScalingPrediction, SaddleError> {
    if !(h > -1.0) {
        return Err(domain(format!("scaling needs h > -1, got {h}")));
    }
    let base = s_omega_main_term(x)?;
    let xi = base.state.xi;
    let corridor = xi.sqrt() / xi.ln().powf(1.5);
    let scaled = solve_rho(((1.0 + h) * x.ln()).ln(), SOLVER_TOL)?;
    Ok(ScalingPrediction {
        predicted: x.powf(h) * base.value / (1.0 + h),
        rho_shift: scaled.rho - base.state.rho,
        h_within_corridor: (1.0 + h).ln().abs() <= corridor,
    })
}

/// Main term for the count of `n <= x` with exactly `k` distinct prime
/// factors, all above `y`:
/// `x g(y, r) xi^{k-1} / (log x * Gamma(1 + r) * (k-1)!)` with `r = (k-1)/xi`.
pub fn phi_k_asymp(x: f64, y: f64, k: u32) -> Result<f64, SaddleError> {
    let lx = x.ln();
    if !(y >= 3.0) {
        return Err(domain(format!("phi approximation needs y >= 3, got {y}")));
    }
    if !(y.ln() <= lx.powf(0.4)) {
        return Err(domain(format!(
            "phi approximation needs y <= exp((log x)^(2/5)), got y = {y}"
        )));
    }
    if k < 1 {
        return Err(domain("phi approximation needs k >= 1".into()));
    }
    let xi = lx.ln();
    let r = (k as f64 - 1.0) / xi;
    if !(r < 2.0 - 1e-9) {
        return Err(domain(format!(
            "phi approximation needs (k-1)/xi below 2, got {r}"
        )));
    }
    let g = g_small(y, Complex64::new(r, 0.0), CountMode::Omega)?;
    let factorial: f64 = (1..k as u64).map(|i| i as f64).product();
    Ok(x * g.re * xi.powi(k as i32 - 1) / (lx * gamma_real(1.0 + r) * factorial))
}

/// Main term for `sum of z^Omega(m)` over `m <= x` with all factors at least
/// `y`: `x g(y, z) / (Gamma(z) (log x)^{1-z})`. At the Gamma poles
/// (`z = 0, -1`) the reciprocal vanishes and so does the main term.
pub fn rough_power_sum_asymp(x: f64, y: f64, z: Complex64) -> Result<Complex64, SaddleError> {
    let lx = x.ln();
    if !(y >= 2.0 && y.ln() <= lx.powf(0.4)) {
        return Err(domain(format!(
            "power-sum approximation needs 2 <= y <= exp((log x)^(2/5)), got y = {y}"
        )));
    }
    if !(z.norm() < 2.0) {
        return Err(domain(format!("power-sum approximation needs |z| < 2, got {z}")));
    }
    if z.im == 0.0 && (z.re == 0.0 || z.re == -1.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let g = g_small(y, z, CountMode::BigOmega)?;
    let power = ((Complex64::new(1.0, 0.0) - z) * lx.ln()).exp();
    Ok(x * g / (gamma_complex(z) * power))
}

/// Residue expansion of the with-multiplicity sum:
/// `sum over 1 <= j <= terms of c_j x / (log x)^{1 - 1/p_j}` over the primes
/// `p_1 = 2, p_2 = 3, ...`.
pub fn s_big_omega_expansion(x: f64, terms: usize) -> Result<f64, SaddleError> {
    assert!(x >= 3.0 && terms >= 1);
    let lx = x.ln();
    let mut acc = 0.0;
    for j in 1..=terms {
        let c = constant_c(j, C_EXPANSION_TOL)?;
        acc += c.value.re * x / lx.powf(1.0 - 1.0 / nth_prime(j) as f64);
    }
    Ok(acc)
}

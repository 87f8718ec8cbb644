//! Products over primes attached to the two factor-counting conventions:
//! finite truncations `F(y, z)`, their compensated limits `script_f`, the
//! boundary factors `g(y, z)`, the meromorphic quotient whose simple poles
//! sit at the reciprocals of primes, and the residue constants `c_j` driving
//! the with-multiplicity asymptotic.
//!
//! Every infinite object carries a certified truncation bound ([`TailBound`])
//! rather than a bare float, so callers can propagate honest error budgets.

use crate::dd::Dd;
use crate::primes::{for_each_prime, sieve_upto};
use crate::specfun::{gamma_complex, gamma_real};
use crate::CountMode;
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

/// A computed value together with a certified bound on everything dropped by
/// truncation (and any internal tolerance), as an absolute error.
#[derive(Debug, Clone, Copy)]
pub struct TailBound {
    pub value: Complex64,
    pub abs_tail: f64,
}

#[derive(Debug, Error)]
pub enum ProductError {
    #[error("tolerance {tol:e} needs primes up to about {required}, beyond the budget {budget}")]
    TolUnreachable { tol: f64, required: u64, budget: u64 },
    #[error("boundary factor has a pole at z = y = {y}")]
    PoleAtBoundary { y: f64 },
    #[error("evaluation at the simple pole z = 1/{p}")]
    PoleAtReciprocalPrime { p: u64 },
    #[error("1/{pole_prime} is not a pole of the product cut at {cutoff} (pole index {j})")]
    ResidueOutOfRange { j: usize, pole_prime: u64, cutoff: u64 },
    #[error("finite product vanishes at y = {y}")]
    ZeroDivisor { y: f64 },
}

/// Largest prime cutoff any certified computation is allowed to stream to.
const CUTOFF_BUDGET: u64 = 4_000_000_000;

/// Internal tolerance for the compensated products consumed by the boundary
/// factors, the pole quotient, and the residues.
const G_INTERNAL_TOL: f64 = 4e-8;

/// Default prime cutoff for the residue constants; the certified tail at this
/// cutoff is far below the accuracy of the constants themselves.
const C_DEFAULT_CUTOFF: u64 = 100_000_000;

/// The `j`-th prime (1-indexed): `nth_prime(1) == 2`.
pub fn nth_prime(j: usize) -> u64 {
    assert!(j >= 1, "prime indexing starts at 1");
    let mut limit = 64u64;
    loop {
        let ps = sieve_upto(limit);
        if ps.len() >= j {
            return ps[j - 1];
        }
        limit *= 4;
    }
}

fn is_prime_small(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// If `z` is exactly a real integer `>= 2`, the prime it may coincide with.
/// The with-multiplicity finite product omits its factor at `q = z` only in
/// that exact case; any perturbation keeps the factor (and its zero).
fn exact_integer_candidate(z: Complex64, mode: CountMode) -> Option<u64> {
    if mode != CountMode::BigOmega || z.im != 0.0 {
        return None;
    }
    let r = z.re;
    if r < 2.0 || r != r.trunc() || r > 9.0e15 {
        return None;
    }
    Some(r as u64)
}

/// Finite product over primes `q <= y`: `prod (1 + z/(q-1))` in distinct
/// mode, `prod (1 - z/q)` in with-multiplicity mode (factor at `q = z`
/// omitted when `z` is exactly that prime).
pub fn f_finite(y: f64, z: Complex64, mode: CountMode) -> Complex64 {
    assert!(y >= 2.0, "finite product starts at the prime 2");
    let skip = exact_integer_candidate(z, mode);
    let mut acc = Complex64::new(1.0, 0.0);
    for_each_prime(y as u64, |q| {
        if skip == Some(q) {
            return;
        }
        let qf = q as f64;
        let factor = match mode {
            CountMode::Omega => Complex64::new(1.0, 0.0) + z / (qf - 1.0),
            CountMode::BigOmega => Complex64::new(1.0, 0.0) - z / qf,
        };
        acc *= factor;
    });
    acc
}

/// Per-factor bound constant: `|log factor| <= c / q^2` once `q >= 2|z| + 2`.
fn tail_const(z: Complex64, mode: CountMode) -> f64 {
    let r = z.norm();
    match mode {
        CountMode::Omega => 1.5 * r + 2.0 * r * r,
        CountMode::BigOmega => r + r * r,
    }
}

/// Compensated product truncated at `cutoff`, with its certified tail. The
/// tail sums `c / q^2` over odd integers past the cutoff, so it is safe (if
/// slightly generous) without any prime-counting input.
pub(crate) fn script_f_at_cutoff(z: Complex64, mode: CountMode, cutoff: u64) -> TailBound {
    let t = tail_const(z, mode) / (2.0 * (cutoff.max(16) as f64 - 1.0));
    let value = if z.im == 0.0 {
        let zr = z.re;
        let mut log_abs = 0.0f64;
        let mut sign = 1.0f64;
        for_each_prime(cutoff, |q| {
            let qf = q as f64;
            let base = zr * (-1.0 / qf).ln_1p();
            match mode {
                CountMode::Omega => {
                    let f = 1.0 + zr / (qf - 1.0);
                    if f < 0.0 {
                        sign = -sign;
                    }
                    log_abs += f.abs().ln() + base;
                }
                CountMode::BigOmega => {
                    log_abs += base - (-zr / qf).ln_1p();
                }
            }
        });
        Complex64::new(sign * log_abs.exp(), 0.0)
    } else {
        let one = Complex64::new(1.0, 0.0);
        let mut log_sum = Complex64::new(0.0, 0.0);
        for_each_prime(cutoff, |q| {
            let qf = q as f64;
            let base = z * (-1.0 / qf).ln_1p();
            log_sum += match mode {
                CountMode::Omega => (one + z / (qf - 1.0)).ln() + base,
                CountMode::BigOmega => base - (one - z / qf).ln(),
            };
        });
        log_sum.exp()
    };
    TailBound {
        value,
        abs_tail: value.norm() * t.exp_m1(),
    }
}

fn sf_cache() -> &'static Mutex<HashMap<(u64, u64, u8), (f64, f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64, u8), (f64, f64, f64)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn mode_tag(mode: CountMode) -> u8 {
    match mode {
        CountMode::Omega => 0,
        CountMode::BigOmega => 1,
    }
}

/// Compensated infinite product over all primes: in distinct mode
/// `prod (1 + z/(q-1)) (1 - 1/q)^z`, in with-multiplicity mode
/// `prod (1 - z/q)^{-1} (1 - 1/q)^z`; both converge for `|z| < 2`.
/// Returns the truncated value with `abs_tail <= tol`, or an error when the
/// required cutoff exceeds the streaming budget.
pub fn script_f(z: Complex64, mode: CountMode, tol: f64) -> Result<TailBound, ProductError> {
    assert!(z.norm() < 2.0, "compensated product needs |z| < 2");
    assert!(tol > 0.0, "tolerance must be positive");
    let key = (z.re.to_bits(), z.im.to_bits(), mode_tag(mode));
    if let Some(&(re, im, tail)) = sf_cache().lock().unwrap().get(&key) {
        if tail <= tol {
            return Ok(TailBound {
                value: Complex64::new(re, im),
                abs_tail: tail,
            });
        }
    }
    let mut cutoff = ((1.0 + tail_const(z, mode) / tol) as u64).max(100_000);
    loop {
        if cutoff > CUTOFF_BUDGET {
            return Err(ProductError::TolUnreachable {
                tol,
                required: cutoff,
                budget: CUTOFF_BUDGET,
            });
        }
        let tb = script_f_at_cutoff(z, mode, cutoff);
        if tb.abs_tail <= tol {
            sf_cache()
                .lock()
                .unwrap()
                .insert(key, (tb.value.re, tb.value.im, tb.abs_tail));
            return Ok(tb);
        }
        cutoff = cutoff.saturating_mul(4);
    }
}

/// Boundary factor comparing the compensated product to its truncation at
/// `y`: `script_f / F(y, z)` in distinct mode, and
/// `script_f * F(y, z) / (1 - z/y)` in with-multiplicity mode, where the
/// extra factor has a pole at `z = y`.
pub fn g_small(y: f64, z: Complex64, mode: CountMode) -> Result<Complex64, ProductError> {
    assert!(y >= 2.0, "boundary factor starts at the prime 2");
    let sf = script_f(z, mode, G_INTERNAL_TOL)?;
    match mode {
        CountMode::Omega => {
            let denom = f_finite(y, z, CountMode::Omega);
            if denom.norm() == 0.0 {
                return Err(ProductError::ZeroDivisor { y });
            }
            Ok(sf.value / denom)
        }
        CountMode::BigOmega => {
            let corner = Complex64::new(1.0, 0.0) - z / y;
            if corner.norm() == 0.0 {
                return Err(ProductError::PoleAtBoundary { y });
            }
            Ok(sf.value * f_finite(y, z, CountMode::BigOmega) / corner)
        }
    }
}

/// Meromorphic quotient `g(y, z) / (Gamma(1+z) F(y, 1/z))` in the
/// with-multiplicity convention. The finite product in the denominator
/// vanishes exactly when `1/z` is a prime `<= y`, so the quotient has simple
/// poles at the reciprocals of those primes; evaluation there is an error
/// naming the prime.
pub fn script_g_omega(y: f64, z: Complex64) -> Result<Complex64, ProductError> {
    assert!(y >= 2.0, "product cutoff starts at the prime 2");
    let zn = z.norm();
    assert!(zn > 0.0 && zn < 2.0, "quotient needs 0 < |z| < 2");
    let w = z.finv();
    let wr = w.re.round();
    if wr >= 2.0 && wr <= y && (w - Complex64::new(wr, 0.0)).norm() <= 1e-12 * w.norm() {
        let p = wr as u64;
        if is_prime_small(p) {
            return Err(ProductError::PoleAtReciprocalPrime { p });
        }
    }
    let g = g_small(y, z, CountMode::BigOmega)?;
    let denom = gamma_complex(Complex64::new(1.0, 0.0) + z) * f_finite(y, w, CountMode::BigOmega);
    if denom.norm() == 0.0 {
        return Err(ProductError::ZeroDivisor { y });
    }
    Ok(g / denom)
}

/// Residue of [`script_g_omega`] at the simple pole `z = 1/p_j`, for a prime
/// cutoff `p >= p_j`. Differentiating the vanishing factor of `F(p, 1/z)`
/// gives `d/dz F(p, 1/z) = p_j F(p, p_j)` at the pole (the skipped-factor
/// convention makes the derivative exactly this finite product), so
/// `residue = g(p, 1/p_j) / (Gamma(1 + 1/p_j) p_j F(p, p_j))`.
pub fn residue_g_omega(p: u64, j: usize) -> Result<f64, ProductError> {
    assert!(is_prime_small(p), "cutoff must itself be a prime");
    let pj = nth_prime(j);
    if pj > p {
        return Err(ProductError::ResidueOutOfRange {
            j,
            pole_prime: pj,
            cutoff: p,
        });
    }
    let zj = 1.0 / pj as f64;
    let g = g_small(p as f64, Complex64::new(zj, 0.0), CountMode::BigOmega)?;
    let fp = f_finite(p as f64, Complex64::new(pj as f64, 0.0), CountMode::BigOmega);
    Ok(g.re / (gamma_real(1.0 + zj) * pj as f64 * fp.re))
}

/// `Gamma(a, x) ~ x^{a-1} e^{-x} (1 + (a-1)/x + (a-1)(a-2)/x^2 + ...)`,
/// truncated at the smallest term. Adequate for `x >= 15` and the small
/// orders used by the prime-sum tails.
fn upper_gamma_asymp(a: f64, x: f64) -> f64 {
    let mut term = 1.0f64;
    let mut total = 1.0f64;
    for i in 0..24 {
        let next = term * (a - 1.0 - i as f64) / x;
        if next.abs() >= term.abs() {
            break;
        }
        total += next;
        term = next;
        if next.abs() < 1e-15 * total.abs() {
            break;
        }
    }
    ((a - 1.0) * x.ln() - x).exp() * total
}

/// One streaming pass for the residue constant at an explicit prime cutoff:
/// running products, the compensated-product logarithm, the double-double
/// term sum, and a snapshot at half the cutoff for the self-consistency
/// bound. The certified `abs_tail` covers everything beyond `cutoff`.
pub fn constant_c_at_cutoff(j: usize, cutoff: u64) -> TailBound {
    let pj_u = nth_prime(j);
    let pj = pj_u as f64;
    let zj = 1.0 / pj;
    let a = pj - zj;
    // Factors (1 - pj/q) for q < pj are negative, one per earlier prime.
    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
    let half_cut = cutoff / 2;

    let mut lq1 = 0.0f64; // log prod_{q <= p} (1 - zj/q)
    let mut lq2 = 0.0f64; // log |prod_{q <= p, q != pj} (1 - pj/q)|
    let mut lsf = 0.0f64; // log of the compensated product, truncated
    let mut sum = Dd::ZERO;
    let mut last_p = 0u64;
    let mut half: Option<(Dd, f64, f64)> = None;

    for_each_prime(cutoff, |q| {
        if half.is_none() && q > half_cut && last_p != 0 {
            half = Some((sum, lq1 - lq2, (last_p as f64).ln()));
        }
        let qf = q as f64;
        let lf1 = (-zj / qf).ln_1p();
        lq1 += lf1;
        lsf += zj * (-1.0 / qf).ln_1p() - lf1;
        if q != pj_u {
            lq2 += (1.0 - pj / qf).abs().ln();
        }
        if q >= pj_u {
            let term = sign * (lq1 - lq2).exp() / (qf * (qf - zj));
            sum = sum.add_f64(term);
        }
        last_p = q;
    });

    // Terms behave like K (log p)^a / p^2; completing the sum with
    // K Gamma(a, log P) (prime density 1/log p absorbed by the substitution
    // u = log t) leaves an error far below the raw tail.
    let completed = |s: Dd, log_ratio: f64, lp: f64| -> (f64, f64) {
        let k = sign * (log_ratio - a * lp.ln()).exp();
        let tail = k * upper_gamma_asymp(a, lp);
        (s.to_f64() + tail, tail)
    };
    let lp = (last_p as f64).ln();
    let (full, tail) = completed(sum, lq1 - lq2, lp);
    let (full_half, _) = match half {
        Some((s, lr, l)) => completed(s, lr, l),
        None => (full, tail),
    };

    let sf = lsf.exp();
    let scale = 3.0 * sf / gamma_real(zj);
    let value = scale * full;

    // Error budget: the half/full discrepancy measures the completion model
    // empirically, the series floor covers its next order, and the last two
    // pieces cover the compensated-product truncation and accumulated
    // rounding.
    let richardson = (full - full_half).abs() * scale.abs();
    let floor = (scale * tail).abs() * (a + 2.0) / (lp * lp);
    let sf_rel = ((zj + zj * zj) / (2.0 * (cutoff as f64 - 1.0))).exp_m1();
    let abs_tail = 4.0 * richardson + floor + value.abs() * (sf_rel + 1e-13);
    TailBound {
        value: Complex64::new(value, 0.0),
        abs_tail,
    }
}

fn c_cache() -> &'static Mutex<HashMap<usize, (f64, f64, u64)>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, (f64, f64, u64)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Residue constant `c_j`: three times the sum over primes `p >= p_j` of the
/// residue of the pole quotient at `1/p_j`, divided by `p^2`; equivalently
/// `3 script_f(1/p_j) / Gamma(1/p_j)` times the prime sum of
/// `F(p, 1/p_j) / (p (p - 1/p_j) F(p, p_j))`. Signs alternate in `j`.
pub fn constant_c(j: usize, tol: f64) -> Result<TailBound, ProductError> {
    constant_c_detailed(j, tol).map(|(tb, _)| tb)
}

/// [`constant_c`] plus the prime cutoff the certified value used.
pub fn constant_c_detailed(j: usize, tol: f64) -> Result<(TailBound, u64), ProductError> {
    assert!(j >= 1, "pole indexing starts at 1");
    assert!(tol > 0.0, "tolerance must be positive");
    if let Some(&(v, tail, cutoff)) = c_cache().lock().unwrap().get(&j) {
        if tail <= tol {
            return Ok((
                TailBound {
                    value: Complex64::new(v, 0.0),
                    abs_tail: tail,
                },
                cutoff,
            ));
        }
    }
    let mut cutoff = C_DEFAULT_CUTOFF;
    loop {
        let tb = constant_c_at_cutoff(j, cutoff);
        if tb.abs_tail <= tol {
            c_cache()
                .lock()
                .unwrap()
                .insert(j, (tb.value.re, tb.abs_tail, cutoff));
            return Ok((tb, cutoff));
        }
        // The tail scales roughly like (log P)^a / P, so grow the cutoff by
        // the observed shortfall (clamped to keep passes predictable).
        let factor = (tb.abs_tail / tol).clamp(2.0, 64.0);
        let next = (cutoff as f64 * factor) as u64;
        if next > CUTOFF_BUDGET {
            return Err(ProductError::TolUnreachable {
                tol,
                required: next,
                budget: CUTOFF_BUDGET,
            });
        }
        cutoff = next;
    }
}

/// Coefficients of the distinct-mode finite product as a polynomial in `z`:
/// `F(p, z) = sum_k lambda_k z^k` with `lambda_k` the elementary symmetric
/// function of the weights `1/(q-1)` over primes `q <= p`. Entry `k` of the
/// result is `lambda_k`, for `k <= k_max <= pi(p)`.
pub fn lambda_omega_coeffs(p: u64, k_max: usize) -> Vec<f64> {
    let primes = sieve_upto(p);
    assert!(
        k_max <= primes.len(),
        "k_max exceeds the number of primes up to p"
    );
    let mut coeffs = vec![0.0f64; k_max + 1];
    coeffs[0] = 1.0;
    for &q in &primes {
        let w = 1.0 / (q as f64 - 1.0);
        for k in (1..=k_max).rev() {
            coeffs[k] += coeffs[k - 1] * w;
        }
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn finite_product_small_examples() {
        // (1 + 1/1)(1 + 1/2) = 3.
        let fo = f_finite(3.0, real(1.0), CountMode::Omega);
        assert_relative_eq!(fo.re, 3.0, max_relative = 1e-14);
        assert_eq!(fo.im, 0.0);
        // (1 - 3/2)(1 - 3/5) = -1/5, factor at q = 3 omitted.
        let fb = f_finite(5.0, real(3.0), CountMode::BigOmega);
        assert_relative_eq!(fb.re, -0.2, max_relative = 1e-14);
        // Empty product once the only factor is skipped.
        assert_eq!(f_finite(2.0, real(2.0), CountMode::BigOmega).re, 1.0);
        // The omission needs exact equality: a perturbed z keeps the
        // (nearly vanishing) factor.
        let perturbed = f_finite(5.0, real(3.0 + 1e-6), CountMode::BigOmega);
        assert!(perturbed.norm() < 1e-5);
    }

    #[test]
    fn finite_product_sign_pattern() {
        // Factors (1 - p_j/q) are negative exactly for the j - 1 primes
        // q < p_j, so the truncated product has sign (-1)^{j-1}.
        for j in 1..=5usize {
            let pj = nth_prime(j);
            let expect = if j % 2 == 1 { 1.0 } else { -1.0 };
            for p in sieve_upto(100) {
                if p < pj {
                    continue;
                }
                let f = f_finite(p as f64, real(pj as f64), CountMode::BigOmega);
                assert_eq!(f.re.signum(), expect, "j = {j}, cutoff p = {p}");
            }
        }
    }

    #[test]
    fn compensated_product_at_zero_is_one() {
        for mode in [CountMode::Omega, CountMode::BigOmega] {
            let tb = script_f(real(0.0), mode, 1e-9).unwrap();
            assert_eq!(tb.value.re, 1.0);
            assert_eq!(tb.value.im, 0.0);
        }
    }

    #[test]
    fn compensated_product_telescopes_at_one() {
        // Distinct mode at z = 1: each factor is (q/(q-1)) ((q-1)/q) = 1.
        let tb = script_f(real(1.0), CountMode::Omega, 1e-6).unwrap();
        assert!((tb.value.re - 1.0).abs() < 1e-10);
        assert!((tb.value.re - 1.0).abs() <= tb.abs_tail);
    }

    #[test]
    fn compensated_product_self_consistency() {
        // A longer truncation must stay inside the certified tail of a
        // shorter one.
        let coarse = script_f_at_cutoff(real(0.5), CountMode::BigOmega, 2_000_000);
        let fine = script_f_at_cutoff(real(0.5), CountMode::BigOmega, 8_000_000);
        assert!(coarse.value.re > 0.0);
        assert!((coarse.value.re - fine.value.re).abs() <= coarse.abs_tail);
        assert!(fine.abs_tail < coarse.abs_tail);
    }

    #[test]
    fn compensated_product_budget_error() {
        let err = script_f(real(0.5), CountMode::BigOmega, 1e-15).unwrap_err();
        match err {
            ProductError::TolUnreachable { required, budget, .. } => {
                assert!(required > budget);
            }
            other => panic!("expected budget error, got {other}"),
        }
    }

    #[test]
    fn boundary_factor_at_zero_is_one() {
        let g = g_small(100.0, real(0.0), CountMode::Omega).unwrap();
        assert_relative_eq!(g.re, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn boundary_factor_smallest_cutoff_collapses() {
        // At y = 2, z = 1/2 the finite product equals the pole factor, so
        // the boundary factor reduces to the compensated product itself.
        let g = g_small(2.0, real(0.5), CountMode::BigOmega).unwrap();
        let sf = script_f(real(0.5), CountMode::BigOmega, 1e-7).unwrap();
        assert_relative_eq!(g.re, sf.value.re, max_relative = 1e-6);
        assert!(g.re > 0.0);
    }

    #[test]
    fn boundary_factor_decay_bracket() {
        // g(y, 1/2) decays like (log y)^{-1/2} with limit constant
        // exp(-gamma/2) = 0.749..; the normalized values sit in a fixed
        // bracket long before the limit.
        for y in [1.0e3, 1.0e4, 1.0e5] {
            let g = g_small(y, real(0.5), CountMode::BigOmega).unwrap();
            let normalized = g.re * y.ln().sqrt();
            assert!(
                (0.55..0.95).contains(&normalized),
                "y = {y}: normalized = {normalized}"
            );
        }
    }

    #[test]
    fn quotient_doubling_identity() {
        // Gamma(2) = 1 and F(2, 1) = 1/2, so the quotient doubles g; the
        // with-multiplicity compensated product telescopes at z = 1, making
        // the value exactly 2 up to truncation.
        let q = script_g_omega(2.0, real(1.0)).unwrap();
        let g = g_small(2.0, real(1.0), CountMode::BigOmega).unwrap();
        assert_relative_eq!(q.re, 2.0 * g.re, max_relative = 1e-12);
        assert_relative_eq!(q.re, 2.0, max_relative = 1e-7);
    }

    #[test]
    fn quotient_pole_detection() {
        match script_g_omega(5.0, real(1.0 / 3.0)).unwrap_err() {
            ProductError::PoleAtReciprocalPrime { p } => assert_eq!(p, 3),
            other => panic!("expected pole error, got {other}"),
        }
        match script_g_omega(5.0, real(0.5)).unwrap_err() {
            ProductError::PoleAtReciprocalPrime { p } => assert_eq!(p, 2),
            other => panic!("expected pole error, got {other}"),
        }
        // 1/z is not near a prime <= y: evaluation succeeds.
        assert!(script_g_omega(2.0, real(1.0 / 3.0) + real(1e-3)).is_ok());
    }

    #[test]
    fn residue_closed_form_at_two() {
        // g(2, 1/2) = script_f(1/2), Gamma(3/2) = sqrt(pi)/2, and the skipped
        // factor leaves F(2, 2) = 1, so the residue is script_f(1/2)/sqrt(pi).
        let res = residue_g_omega(2, 1).unwrap();
        let sf = script_f(real(0.5), CountMode::BigOmega, 1e-7).unwrap();
        assert_relative_eq!(
            res,
            sf.value.re / std::f64::consts::PI.sqrt(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn residue_matches_numeric_limit() {
        // (z - 1/p_j) script_g_omega(p, z) tends to the residue; evaluate
        // at distance 1e-6 from the pole.
        for (p, j) in [(3u64, 1usize), (5, 2), (7, 3)] {
            let zj = 1.0 / nth_prime(j) as f64;
            let z = real(zj + 1e-6);
            let near = script_g_omega(p as f64, z).unwrap();
            let numeric = (z.re - zj) * near.re;
            let exact = residue_g_omega(p, j).unwrap();
            assert_relative_eq!(numeric, exact, max_relative = 1e-4);
        }
    }

    #[test]
    fn residue_out_of_range() {
        match residue_g_omega(3, 3).unwrap_err() {
            ProductError::ResidueOutOfRange { pole_prime, cutoff, .. } => {
                assert_eq!(pole_prime, 5);
                assert_eq!(cutoff, 3);
            }
            other => panic!("expected range error, got {other}"),
        }
    }

    #[test]
    fn residue_sum_matches_direct_terms() {
        // 3 residue(p, j) / p^2 telescopes algebraically into the c_j
        // summand: Gamma(1 + 1/p_j) p_j = Gamma(1/p_j) and
        // p^2 (1 - 1/(p p_j)) = p (p - 1/p_j). Check the partial sums agree.
        for j in [1usize, 2] {
            let pj = nth_prime(j);
            let zj = 1.0 / pj as f64;
            let sf = script_f(real(zj), CountMode::BigOmega, 1e-7).unwrap();
            let scale = 3.0 * sf.value.re / gamma_real(zj);
            let mut via_residues = 0.0;
            let mut direct = 0.0;
            for p in sieve_upto(300) {
                if p < pj {
                    continue;
                }
                via_residues += 3.0 * residue_g_omega(p, j).unwrap() / (p * p) as f64;
                let pf = p as f64;
                let q1 = f_finite(pf, real(zj), CountMode::BigOmega).re;
                let q2 = f_finite(pf, real(pj as f64), CountMode::BigOmega).re;
                direct += scale * q1 / (pf * (pf - zj) * q2);
            }
            assert_relative_eq!(via_residues, direct, max_relative = 1e-9);
        }
    }

    #[test]
    fn residue_constants_match_references() {
        let (c1, cutoff1) = constant_c_detailed(1, 2e-6).unwrap();
        assert!((c1.value.re - 1.380486).abs() < 5e-6);
        assert!((c1.value.re - 1.3804860691).abs() < 1e-7);
        assert!(c1.abs_tail <= 2e-6);
        assert!(cutoff1 >= 100_000_000);

        let c2 = constant_c(2, 2e-6).unwrap();
        assert!((c2.value.re - (-0.983350)).abs() < 5e-6);
        assert!((c2.value.re - (-0.9833496446)).abs() < 1e-7);

        // Sign alternation and a pinned third constant.
        let c3 = constant_c(3, 2e-6).unwrap();
        assert!((c3.value.re - 0.6492506340).abs() < 1e-7);

        // The cache serves repeat queries bit-identically.
        let again = constant_c(1, 2e-6).unwrap();
        assert_eq!(again.value.re.to_bits(), c1.value.re.to_bits());
    }

    #[test]
    fn lambda_small_examples() {
        assert_eq!(lambda_omega_coeffs(2, 0), vec![1.0]);
        // e_1 of {1, 1/2} and e_2 of {1, 1/2, 1/4} are exactly dyadic.
        assert_eq!(lambda_omega_coeffs(3, 1)[1], 1.5);
        assert_eq!(lambda_omega_coeffs(5, 2)[2], 0.875);
    }

    #[test]
    fn lambda_matches_smooth_enumeration() {
        // lambda_k is the sum of 1/a over 13-smooth a with exactly k distinct
        // prime factors; enumerate those up to 1e12. The dropped tail is at
        // most prod (1 - q^{-1/2})^{-1} / sqrt(cap) < 5e-5.
        let primes = sieve_upto(13);
        let cap = 1e12;
        let k_max = 4usize;
        let mut sums = vec![0.0f64; k_max + 1];
        fn go(primes: &[u64], idx: usize, a: f64, omega: usize, cap: f64, out: &mut [f64]) {
            if idx == primes.len() {
                if omega < out.len() {
                    out[omega] += 1.0 / a;
                }
                return;
            }
            go(primes, idx + 1, a, omega, cap, out);
            let q = primes[idx] as f64;
            let mut b = a * q;
            while b <= cap {
                go(primes, idx + 1, b, omega + 1, cap, out);
                b *= q;
            }
        }
        go(&primes, 0, 1.0, 0, cap, &mut sums);
        let lam = lambda_omega_coeffs(13, k_max);
        for k in 0..=k_max {
            assert!(
                (sums[k] - lam[k]).abs() < 5e-5,
                "k = {k}: enumerated {} vs coefficients {}",
                sums[k],
                lam[k]
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn finite_product_conjugation(
            y in 2u64..200,
            re in -3.0..3.0f64,
            im in -3.0..3.0f64,
            with_multiplicity in any::<bool>(),
        ) {
            let mode = if with_multiplicity {
                CountMode::BigOmega
            } else {
                CountMode::Omega
            };
            let z = Complex64::new(re, im);
            let a = f_finite(y as f64, z.conj(), mode);
            let b = f_finite(y as f64, z, mode).conj();
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
        }

        #[test]
        fn lambda_generating_identity(
            index in 0usize..25,
            re in -2.0..2.0f64,
            im in -2.0..2.0f64,
        ) {
            let primes = sieve_upto(100);
            let p = primes[index];
            let k_max = sieve_upto(p).len();
            let lam = lambda_omega_coeffs(p, k_max);
            let z = Complex64::new(re, im);
            let mut horner = Complex64::new(0.0, 0.0);
            for &c in lam.iter().rev() {
                horner = horner * z + c;
            }
            let direct = f_finite(p as f64, z, CountMode::Omega);
            prop_assert!((horner - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
        }
    }
}

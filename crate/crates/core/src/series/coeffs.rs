//! Scalar coefficient families feeding the cascades: the alternating-series
//! constants alpha_j, the prime-sum expansion constants beta_m / gamma_m, and
//! their combination fraka_m with its even-zeta closed form.

use super::sympoly::SymPoly;
use crate::specfun::zeta_even_exact;
use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact or floating coefficient value, depending on the index parity.
#[derive(Clone, Debug, PartialEq)]
pub enum CoeffValue {
    Exact(SymPoly),
    Numeric(f64),
}

impl CoeffValue {
    /// Numeric value, substituting Lambda = log 2 and Pi = pi^2 when exact.
    pub fn to_f64(&self) -> f64 {
        match self {
            CoeffValue::Exact(p) => {
                p.eval(std::f64::consts::LN_2, std::f64::consts::PI * std::f64::consts::PI)
            }
            CoeffValue::Numeric(v) => *v,
        }
    }
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn factorial(n: u64) -> BigRational {
    let mut f = BigRational::from_integer(BigInt::from(1));
    for i in 2..=n {
        f *= BigRational::from_integer(BigInt::from(i));
    }
    f
}

/// alpha_j = 2 (j-1)! sum_{n >= 1} (-1)^{n-1} / n^j = 2 (j-1)! (1 - 2^{1-j}) zeta(j).
///
/// j = 1 gives exactly 2 Lambda; even j give exact rational multiples of
/// Pi^{j/2}; odd j >= 3 fall back to a numeric alternating sum.
pub fn alpha_coeff(j: usize) -> CoeffValue {
    assert!(j >= 1);
    if j == 1 {
        return CoeffValue::Exact(SymPoly::lambda().scale(&rat(2, 1)));
    }
    if j % 2 == 0 {
        return CoeffValue::Exact(alpha_even_exact(j / 2));
    }
    // 2 (j-1)! eta(j); the alternating zeta converges fast for j >= 3.
    let mut eta = 0.0f64;
    let mut n = 1u64;
    loop {
        let term = (if n % 2 == 1 { 1.0 } else { -1.0 }) / (n as f64).powi(j as i32);
        // Averaged tail: half the next term bounds the alternating remainder
        // well below 1e-16 at this cutoff.
        if n > 100_000 {
            eta += term / 2.0;
            break;
        }
        eta += term;
        n += 1;
    }
    let fact: f64 = (1..j as u64).map(|i| i as f64).product();
    CoeffValue::Numeric(2.0 * fact * eta)
}

/// alpha_{2k} as an exact element of Q[Pi].
pub fn alpha_even_exact(k: usize) -> SymPoly {
    assert!(k >= 1);
    let j = 2 * k;
    // zeta(2k) = zc * Pi^k with zc = zeta_even_exact(2k).
    let zc = zeta_even_exact(j as u32);
    let two_jm1 = factorial(j as u64 - 1) * rat(2, 1);
    let one_minus = BigRational::from_integer(BigInt::from(1)) - rat(1, 1 << (j - 1));
    SymPoly::term(0, k as u32, two_jm1 * one_minus * zc)
}

/// beta_m, gamma_m by alternating summation and fraka_m = gamma_m + beta_m
/// by its closed form 2 (m-1)! sum_{0 <= j <= m/2} eta(2j), eta being the
/// alternating zeta with eta(0) = 1/2. The li-driven m! of the small-prime
/// sum already lives inside gamma_m, so the total bracket coefficient of the
/// prime product log F at (log rho)^{-m} is gamma_m + beta_m and nothing more;
/// adding another m! on top shifts the rho-saddle expansion off the quantity
/// it must track (checked numerically in the cascade golden tests).
pub fn beta_gamma_fraka(m: usize) -> (f64, f64, CoeffValue) {
    assert!(m >= 1);
    let beta = beta_numeric(m);
    let gamma = gamma_numeric(m);
    (beta, gamma, CoeffValue::Exact(fraka_exact(m)))
}

fn beta_numeric(m: usize) -> f64 {
    // (-1)^m (m-1)! sum (-1)^{n+1} / (n^m (n+1)).
    let mut sum = 0.0f64;
    let cut = 2_000_000u64;
    for n in 1..=cut {
        let term = (if n % 2 == 1 { 1.0 } else { -1.0 })
            / ((n as f64).powi(m as i32) * (n as f64 + 1.0));
        sum += if n == cut { term / 2.0 } else { term };
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let fact: f64 = (1..m as u64).map(|i| i as f64).product();
    sign * fact * sum
}

fn gamma_numeric(m: usize) -> f64 {
    // m! {1 + (1/m) sum (-1)^{n+1} / (n (n+1)^m)}.
    let mut sum = 0.0f64;
    let cut = 2_000_000u64;
    for n in 1..=cut {
        let term = (if n % 2 == 1 { 1.0 } else { -1.0 })
            / ((n as f64) * (n as f64 + 1.0).powi(m as i32));
        sum += if n == cut { term / 2.0 } else { term };
    }
    let fact: f64 = (1..=m as u64).map(|i| i as f64).product();
    fact * (1.0 + sum / m as f64)
}

/// fraka_m = 2 (m-1)! sum_{0 <= j <= m/2} eta(2j) exactly, in Q[Pi].
pub fn fraka_exact(m: usize) -> SymPoly {
    assert!(m >= 1);
    let mut inner = SymPoly::ratio(1, 2);
    for j in 1..=(m / 2) {
        let zc = zeta_even_exact(2 * j as u32);
        let factor = BigRational::from_integer(BigInt::from(1)) - rat(1, 1 << (2 * j - 1));
        inner = inner.add(&SymPoly::term(0, j as u32, factor * zc));
    }
    let scale = factorial(m as u64) * rat(2, m as i64);
    inner.scale(&scale)
}

/// fraka_{1;n}: the coefficient of (log rho)^{-n} in the saddle bracket;
/// fraka_{1;1} = -1/2, and for n >= 2 it is fraka_{n-1}/2 plus, at odd n,
/// alpha_{n-1}/2 contributed by the even-index expansion of the saddle
/// equation (the even alpha index keeps everything inside Q[Lambda, Pi]).
pub fn fraka1(n: usize) -> SymPoly {
    assert!(n >= 1);
    if n == 1 {
        return SymPoly::ratio(-1, 2);
    }
    let mut v = fraka_exact(n - 1).scale(&rat(1, 2));
    if n % 2 == 1 {
        v = v.add(&alpha_even_exact((n - 1) / 2).scale(&rat(1, 2)));
    }
    v
}

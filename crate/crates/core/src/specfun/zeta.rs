//! Even zeta values as exact rationals times powers of pi^2, from the
//! Bernoulli recurrence sum_{k=0}^{m} C(m+1, k) B_k = 0.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// B_0 .. B_n inclusive (B_1 = -1/2 convention).
fn bernoulli_upto(n: u32) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n as usize + 1);
    b.push(BigRational::one());
    for m in 1..=n as usize {
        // C(m+1, k) running binomial over k.
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate().take(m) {
            acc += BigRational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m as i64 + 1 - k as i64) / BigInt::from(k as i64 + 1);
        }
        b.push(-acc / big(m as i64 + 1));
    }
    b
}

pub fn bernoulli(n: u32) -> BigRational {
    bernoulli_upto(n).pop().unwrap()
}

/// The exact rational r with zeta(j) = r * pi^j, for even j in [2, 40].
pub fn zeta_even_exact(j: u32) -> BigRational {
    assert!(j >= 2 && j <= 40 && j % 2 == 0, "zeta_even domain: even j in [2, 40], got {j}");
    let n = j / 2;
    // zeta(2n) = (-1)^{n+1} (2 pi)^{2n} B_{2n} / (2 (2n)!)
    let b2n = bernoulli(j);
    let mut fact = BigRational::one();
    for k in 2..=j as i64 {
        fact *= big(k);
    }
    let sign = if n % 2 == 1 { BigRational::one() } else { -BigRational::one() };
    let two_pow = BigRational::from_integer(BigInt::from(2).pow(j - 1));
    sign * two_pow * b2n / fact
}

pub fn zeta_even(j: u32) -> f64 {
    use num_traits::ToPrimitive;
    let r = zeta_even_exact(j);
    r.to_f64().unwrap() * std::f64::consts::PI.powi(j as i32)
}

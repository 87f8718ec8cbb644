//! Truncated bivariate power series over Q[Lambda, Pi].
//!
//! A `BiSeries` stores every coefficient of s^m t^n with m <= tm, n <= tn for
//! its two formal variables (called s and t here; the cascades instantiate
//! them as sigma/tau and sigma/X respectively). Arithmetic is exact: any
//! retained index receives all of its contributions, because products only
//! combine retained indices componentwise.

use super::sympoly::SymPoly;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    tm: usize,
    tn: usize,
    c: Vec<SymPoly>,
}

impl BiSeries {
    pub fn zero(tm: usize, tn: usize) -> Self {
        Self { tm, tn, c: vec![SymPoly::zero(); (tm + 1) * (tn + 1)] }
    }

    pub fn one(tm: usize, tn: usize) -> Self {
        let mut s = Self::zero(tm, tn);
        *s.at_mut(0, 0) = SymPoly::one();
        s
    }

    pub fn constant(tm: usize, tn: usize, p: SymPoly) -> Self {
        let mut s = Self::zero(tm, tn);
        *s.at_mut(0, 0) = p;
        s
    }

    pub fn trunc(&self) -> (usize, usize) {
        (self.tm, self.tn)
    }

    fn idx(&self, m: usize, n: usize) -> usize {
        debug_assert!(m <= self.tm && n <= self.tn);
        m * (self.tn + 1) + n
    }

    pub fn coeff(&self, m: usize, n: usize) -> &SymPoly {
        &self.c[self.idx(m, n)]
    }

    pub fn at_mut(&mut self, m: usize, n: usize) -> &mut SymPoly {
        let i = self.idx(m, n);
        &mut self.c[i]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(SymPoly::is_zero)
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            self.tm == other.tm && self.tn == other.tn,
            "incompatible truncations ({}, {}) vs ({}, {})",
            self.tm,
            self.tn,
            other.tm,
            other.tn
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (a, b) in out.c.iter_mut().zip(&other.c) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (a, b) in out.c.iter_mut().zip(&other.c) {
            *a = a.sub(b);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for a in out.c.iter_mut() {
            *a = a.neg();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.tm, self.tn);
        for m1 in 0..=self.tm {
            for n1 in 0..=self.tn {
                let a = self.coeff(m1, n1);
                if a.is_zero() {
                    continue;
                }
                for m2 in 0..=(self.tm - m1) {
                    for n2 in 0..=(self.tn - n1) {
                        let b = other.coeff(m2, n2);
                        if b.is_zero() {
                            continue;
                        }
                        let prod = a.mul(b);
                        let cur = out.at_mut(m1 + m2, n1 + n2);
                        *cur = cur.add(&prod);
                    }
                }
            }
        }
        out
    }

    pub fn scale_sym(&self, p: &SymPoly) -> Self {
        let mut out = self.clone();
        for a in out.c.iter_mut() {
            *a = a.mul(p);
        }
        out
    }

    pub fn scale_rat(&self, r: &BigRational) -> Self {
        let mut out = self.clone();
        for a in out.c.iter_mut() {
            *a = a.scale(r);
        }
        out
    }

    pub fn powi(&self, k: usize) -> Self {
        let mut out = Self::one(self.tm, self.tn);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Largest power of a zero-constant series that can survive truncation.
    fn nilpotency(&self) -> usize {
        self.tm + self.tn
    }

    /// exp(self); requires zero constant term.
    pub fn exp(&self) -> Self {
        assert!(self.coeff(0, 0).is_zero(), "exp needs zero constant term");
        let mut out = Self::one(self.tm, self.tn);
        let mut pw = Self::one(self.tm, self.tn);
        let mut fact = BigRational::one();
        for i in 1..=self.nilpotency() {
            pw = pw.mul(self);
            if pw.is_zero() {
                break;
            }
            fact *= BigRational::from_integer(i.into());
            out = out.add(&pw.scale_rat(&fact.recip()));
        }
        out
    }

    /// log(1 + self); requires zero constant term.
    pub fn log1p(&self) -> Self {
        assert!(self.coeff(0, 0).is_zero(), "log1p needs zero constant term");
        let mut out = Self::zero(self.tm, self.tn);
        let mut pw = Self::one(self.tm, self.tn);
        for i in 1..=self.nilpotency() {
            pw = pw.mul(self);
            if pw.is_zero() {
                break;
            }
            let sign = if i % 2 == 1 { 1 } else { -1 };
            let coef = BigRational::new(sign.into(), i.into());
            out = out.add(&pw.scale_rat(&coef));
        }
        out
    }

    /// Multiplicative inverse; the constant term must be a nonzero rational.
    pub fn recip(&self) -> Self {
        let c0 = self
            .coeff(0, 0)
            .as_rational()
            .expect("recip needs a pure rational constant term");
        assert!(!c0.is_zero(), "recip of a non-unit");
        let inv = c0.recip();
        // self = c0 (1 + u): invert by the finite Neumann series of -u.
        let u = self.scale_rat(&inv).sub(&Self::one(self.tm, self.tn));
        let mut out = Self::one(self.tm, self.tn);
        let mut pw = Self::one(self.tm, self.tn);
        for i in 1..=self.nilpotency() {
            pw = pw.mul(&u);
            if pw.is_zero() {
                break;
            }
            if i % 2 == 1 {
                out = out.sub(&pw);
            } else {
                out = out.add(&pw);
            }
        }
        out.scale_rat(&inv)
    }

    /// (self)^{-k} for k >= 1.
    pub fn pow_neg(&self, k: usize) -> Self {
        assert!(k >= 1);
        self.recip().powi(k)
    }

    /// Substitute `inner` (zero constant term) for the first variable of
    /// `self`, which must not involve the second variable.
    pub fn compose(&self, inner: &Self) -> Self {
        self.check_compatible(inner);
        assert!(inner.coeff(0, 0).is_zero(), "compose needs zero-constant inner");
        for m in 0..=self.tm {
            for n in 1..=self.tn {
                assert!(
                    self.coeff(m, n).is_zero(),
                    "compose outer must be univariate in the first variable"
                );
            }
        }
        let mut out = Self::zero(self.tm, self.tn);
        let mut pw = Self::one(self.tm, self.tn);
        for m in 0..=self.tm {
            if m > 0 {
                pw = pw.mul(inner);
            }
            let a = self.coeff(m, 0);
            if !a.is_zero() {
                out = out.add(&pw.scale_sym(a));
            }
        }
        out
    }

    /// Numeric evaluation at (s, t) with Lambda, Pi substituted.
    pub fn eval(&self, s: f64, t: f64, lambda: f64, pi2: f64) -> f64 {
        let mut acc = 0.0;
        for m in 0..=self.tm {
            for n in 0..=self.tn {
                let c = self.coeff(m, n);
                if !c.is_zero() {
                    acc += c.eval(lambda, pi2) * s.powi(m as i32) * t.powi(n as i32);
                }
            }
        }
        acc
    }
}

/// Named operations over `BiSeries`, mirroring the module's operation table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Exp,
    Log1p,
    PowNeg,
    Compose,
}

/// Dispatch wrapper. `b` is ignored by the unary operations (`Exp`, `Log1p`);
/// `PowNeg` reads the exponent as `k`, defaulting to 1.
pub fn series_ops(a: &BiSeries, b: &BiSeries, op: SeriesOp, k: usize) -> BiSeries {
    match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Mul => a.mul(b),
        SeriesOp::Exp => a.exp(),
        SeriesOp::Log1p => a.log1p(),
        SeriesOp::PowNeg => a.pow_neg(k.max(1)),
        SeriesOp::Compose => a.compose(b),
    }
}

/// Signed binomial C(n, k) as a rational, for series expansions.
pub fn binom_rat(n: i64, k: u32) -> BigRational {
    let mut num = BigRational::one();
    for i in 0..k as i64 {
        num *= BigRational::from_integer((n - i).into());
    }
    let mut den = BigRational::one();
    for i in 1..=k as i64 {
        den *= BigRational::from_integer(i.into());
    }
    num / den
}

impl std::fmt::Display for BiSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for m in 0..=self.tm {
            for n in 0..=self.tn {
                let c = self.coeff(m, n);
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({c})*s^{m}*t^{n}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn s_var(tm: usize, tn: usize) -> BiSeries {
        let mut s = BiSeries::zero(tm, tn);
        *s.at_mut(1, 0) = SymPoly::one();
        s
    }

    fn t_var(tm: usize, tn: usize) -> BiSeries {
        let mut s = BiSeries::zero(tm, tn);
        *s.at_mut(0, 1) = SymPoly::one();
        s
    }

    #[test]
    fn exp_log_inverse_pair() {
        // exp(log1p(s + 2 s t)) = 1 + s + 2 s t exactly.
        let a = s_var(4, 4).add(&s_var(4, 4).mul(&t_var(4, 4)).scale_rat(
            &BigRational::from_integer(BigInt::from(2)),
        ));
        let round = a.log1p().exp();
        let expected = BiSeries::one(4, 4).add(&a);
        assert_eq!(round, expected);
    }

    #[test]
    fn recip_times_self_is_one() {
        let a = BiSeries::one(3, 3)
            .add(&s_var(3, 3).scale_sym(&SymPoly::lambda()))
            .add(&t_var(3, 3).scale_rat(&BigRational::new(BigInt::from(-1), BigInt::from(2))));
        let prod = a.mul(&a.recip());
        assert_eq!(prod, BiSeries::one(3, 3));
    }

    #[test]
    fn compose_geometric_matches_direct_expansion() {
        // outer = sum_m s^m (geometric), inner = t + s t: compose = 1/(1-inner).
        let (tm, tn) = (4, 4);
        let mut outer = BiSeries::zero(tm, tn);
        for m in 0..=tm {
            *outer.at_mut(m, 0) = SymPoly::one();
        }
        let inner = t_var(tm, tn).add(&s_var(tm, tn).mul(&t_var(tm, tn)));
        let composed = outer.compose(&inner);
        let direct = BiSeries::one(tm, tn).sub(&inner).recip();
        assert_eq!(composed, direct);
    }

    #[test]
    fn pow_neg_matches_binomial_series() {
        // (1 - t)^{-2} = sum (n+1) t^n.
        let a = BiSeries::one(2, 5).sub(&t_var(2, 5));
        let got = a.pow_neg(2);
        for n in 0..=5usize {
            let want = SymPoly::from_int((n + 1) as i64);
            assert_eq!(got.coeff(0, n), &want, "n = {n}");
        }
    }

    #[test]
    fn binomial_rationals() {
        assert_eq!(binom_rat(5, 2), BigRational::from_integer(BigInt::from(10)));
        // C(-2, 3) = -4.
        assert_eq!(binom_rat(-2, 3), BigRational::from_integer(BigInt::from(-4)));
        assert_eq!(binom_rat(7, 0), BigRational::from_integer(BigInt::from(1)));
    }

    proptest! {
        #[test]
        fn mul_commutative_associative(seed_a in 0i64..50, seed_b in 0i64..50, seed_c in 0i64..50) {
            let (tm, tn) = (3, 3);
            let build = |seed: i64| {
                let mut s = BiSeries::zero(tm, tn);
                let mut v = seed;
                for m in 0..=tm {
                    for n in 0..=tn {
                        v = (v * 31 + 7) % 23;
                        if v % 3 == 0 {
                            *s.at_mut(m, n) = SymPoly::ratio(v - 11, 1 + (v % 5).abs());
                        } else if v % 3 == 1 {
                            *s.at_mut(m, n) = SymPoly::lambda().scale(
                                &BigRational::from_integer(BigInt::from(v - 10)),
                            );
                        }
                    }
                }
                s
            };
            let (a, b, c) = (build(seed_a), build(seed_b + 100), build(seed_c + 200));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        }
    }
}

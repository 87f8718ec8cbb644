//! Exact polynomials in the formal constants Lambda (= log 2) and Pi (= pi^2)
//! over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Element of Q[Lambda, Pi]. Keys are (deg Lambda, deg Pi); zero coefficients
/// are never stored, so structural equality is semantic equality.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl SymPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut p = Self::default();
        p.add_term(0, 0, r);
        p
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// p/q as an element of the coefficient field.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0);
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// The symbol Lambda = log 2.
    pub fn lambda() -> Self {
        let mut p = Self::default();
        p.add_term(1, 0, BigRational::one());
        p
    }

    /// The symbol Pi = pi^2.
    pub fn pi_sym() -> Self {
        let mut p = Self::default();
        p.add_term(0, 1, BigRational::one());
        p
    }

    /// Single term c * Lambda^dl * Pi^dp.
    pub fn term(dl: u32, dp: u32, c: BigRational) -> Self {
        let mut p = Self::default();
        p.add_term(dl, dp, c);
        p
    }

    fn add_term(&mut self, dl: u32, dp: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((dl, dp)).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(dl, dp));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k.0, k.1, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::default();
        for (&k, c) in &self.terms {
            out.terms.insert(k, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (&(al, ap), ac) in &self.terms {
            for (&(bl, bp), bc) in &other.terms {
                out.add_term(al + bl, ap + bp, ac * bc);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::default();
        }
        let mut out = Self::default();
        for (&k, v) in &self.terms {
            out.terms.insert(k, v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Some(c) when the polynomial is the pure rational constant c.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    /// Numeric value at Lambda = lambda, Pi = pi2.
    pub fn eval(&self, lambda: f64, pi2: f64) -> f64 {
        let mut acc = 0.0;
        for (&(dl, dp), c) in &self.terms {
            acc += c.to_f64().expect("rational out of f64 range")
                * lambda.powi(dl as i32)
                * pi2.powi(dp as i32);
        }
        acc
    }

    /// Iterate terms as ((deg Lambda, deg Pi), coefficient).
    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(dl, dp), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if dl > 0 {
                write!(f, "*L^{dl}")?;
            }
            if dp > 0 {
                write!(f, "*P^{dp}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_identities() {
        let a = SymPoly::lambda().add(&SymPoly::ratio(3, 2));
        let b = SymPoly::pi_sym().sub(&SymPoly::lambda());
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.sub(&a), SymPoly::zero());
        assert_eq!(a.mul(&SymPoly::one()), a);
        assert_eq!(a.mul(&SymPoly::zero()), SymPoly::zero());
    }

    #[test]
    fn no_zero_terms_survive_cancellation() {
        let a = SymPoly::lambda();
        let s = a.add(&a.neg());
        assert!(s.is_zero());
        assert_eq!(s.iter().count(), 0);
    }

    #[test]
    fn eval_matches_structure() {
        // 2*Lambda^2*Pi - 1/3 at Lambda = log 2, Pi = pi^2.
        let p = SymPoly::term(2, 1, BigRational::from_integer(BigInt::from(2)))
            .add(&SymPoly::ratio(-1, 3));
        let l = std::f64::consts::LN_2;
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let want = 2.0 * l * l * pi2 - 1.0 / 3.0;
        assert!((p.eval(l, pi2) - want).abs() < 1e-15);
    }

    #[test]
    fn rational_detection() {
        assert_eq!(
            SymPoly::ratio(7, 4).as_rational(),
            Some(BigRational::new(BigInt::from(7), BigInt::from(4)))
        );
        assert!(SymPoly::lambda().as_rational().is_none());
        assert_eq!(SymPoly::zero().as_rational(), Some(BigRational::zero()));
    }
}

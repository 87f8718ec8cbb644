//! The two exact coefficient cascades.
//!
//! The R cascade inverts the saddle-point equation by Lagrange inversion in
//! the variables sigma = 1/log xi and tau = log((1/2) log xi)/log xi, giving
//! the polynomials R_j with rho ~ sqrt(2 xi / log xi) sum_j R_j(loglog xi) sigma^j.
//!
//! The P cascade then expands the saddle bracket
//! 2 rho log rho {1 - loglog rho / log rho + sum_n fraka_{1;n} (log rho)^{-n}}
//! in (sigma, X = loglog xi), where the whole product collapses to
//! sqrt(2 xi log xi) sum_j P_j(X) sigma^j.  Both cascades are exact over
//! Q[Lambda, Pi].

use super::biseries::{binom_rat, BiSeries};
use super::coeffs::{alpha_even_exact, fraka1};
use super::sympoly::SymPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Which polynomial family a `PolyFamily` carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    R,
    P,
}

/// A finite family of univariate polynomials with Q[Lambda, Pi] coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFamily {
    pub family: Family,
    /// polys[j][l] is the coefficient of X^l in the j-th polynomial.
    pub polys: Vec<Vec<SymPoly>>,
}

impl PolyFamily {
    pub fn depth(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn coeff(&self, j: usize, l: usize) -> &SymPoly {
        &self.polys[j][l]
    }

    /// Numeric value of the j-th polynomial at X = x, with Lambda = log 2 and
    /// Pi = pi^2 substituted.
    pub fn eval(&self, j: usize, x: f64) -> f64 {
        let lambda = std::f64::consts::LN_2;
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let mut acc = 0.0;
        for (l, c) in self.polys[j].iter().enumerate() {
            acc += c.eval(lambda, pi2) * x.powi(l as i32);
        }
        acc
    }

    pub fn to_json(&self) -> Vec<PolyJson> {
        self.polys
            .iter()
            .enumerate()
            .map(|(j, poly)| PolyJson {
                family: match self.family {
                    Family::R => "R".into(),
                    Family::P => "P".into(),
                },
                j,
                coefficients: poly
                    .iter()
                    .enumerate()
                    .flat_map(|(l, c)| {
                        c.iter().map(move |(&(dl, dp), r)| PolyCoeffJson {
                            deg_x: l,
                            deg_lambda: dl,
                            deg_pi: dp,
                            rational: r.to_string(),
                        })
                    })
                    .collect(),
            })
            .collect()
    }
}

/// One monomial of a polynomial-family JSON dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyCoeffJson {
    #[serde(rename = "degX")]
    pub deg_x: usize,
    #[serde(rename = "degLambda")]
    pub deg_lambda: u32,
    #[serde(rename = "degPi")]
    pub deg_pi: u32,
    pub rational: String,
}

/// JSON record for one polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub family: String,
    pub j: usize,
    pub coefficients: Vec<PolyCoeffJson>,
}

/// Truncated power series in an auxiliary variable z whose coefficients are
/// bivariate series; carries the Lagrange-inversion bookkeeping.
#[derive(Clone, Debug)]
struct ZSeries {
    c: Vec<BiSeries>,
}

impl ZSeries {
    fn zero(zt: usize, tm: usize, tn: usize) -> Self {
        Self { c: vec![BiSeries::zero(tm, tn); zt + 1] }
    }

    fn mul(&self, other: &Self) -> Self {
        let zt = self.c.len() - 1;
        let (tm, tn) = self.c[0].trunc();
        let mut out = Self::zero(zt, tm, tn);
        for i in 0..=zt {
            if self.c[i].is_zero() {
                continue;
            }
            for k in 0..=(zt - i) {
                if other.c[k].is_zero() {
                    continue;
                }
                out.c[i + k] = out.c[i + k].add(&self.c[i].mul(&other.c[k]));
            }
        }
        out
    }

    /// Power-series inverse in z; c[0] must be invertible as a BiSeries.
    fn recip(&self) -> Self {
        let zt = self.c.len() - 1;
        let (tm, tn) = self.c[0].trunc();
        let inv0 = self.c[0].recip();
        let mut out = Self::zero(zt, tm, tn);
        out.c[0] = inv0.clone();
        for k in 1..=zt {
            let mut acc = BiSeries::zero(tm, tn);
            for i in 1..=k {
                acc = acc.add(&self.c[i].mul(&out.c[k - i]));
            }
            out.c[k] = inv0.mul(&acc).neg();
        }
        out
    }
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// e^{h} as a series in (sigma, tau): the coefficient of sigma^m tau^n is the
/// cascade value a_{10;m,n}.
fn exp_h_series(depth: usize) -> BiSeries {
    let t = depth;

    // w = -3 tau - 2 sigma log(1 - tau) + sum_k alpha_{2k} (2 sigma)^{2k+1} (1-tau)^{-2k}.
    let mut w = BiSeries::zero(t, t);
    if t >= 1 {
        *w.at_mut(0, 1) = SymPoly::from_int(-3);
        for n in 1..=t {
            *w.at_mut(1, n) = SymPoly::ratio(2, n as i64);
        }
    }
    let mut k = 1usize;
    while 2 * k + 1 <= t {
        let alpha = alpha_even_exact(k);
        let pow2 = rat(1 << (2 * k + 1), 1);
        for n in 0..=t {
            let c = binom_rat((2 * k + n - 1) as i64, n as u32) * &pow2;
            let term = alpha.scale(&c);
            let cur = w.at_mut(2 * k + 1, n);
            *cur = cur.add(&term);
        }
        k += 1;
    }

    // G = 2 sigma / (1 - tau): the z-coefficient of the inner variable
    // q = G z appearing in lambda(z).
    let mut g = BiSeries::zero(t, t);
    if t >= 1 {
        for n in 0..=t {
            *g.at_mut(1, n) = SymPoly::from_int(2);
        }
    }

    // Prefactors alpha_{2k} (2 sigma)^{2k} (1 - tau)^{-2k}.
    let mut prefs: Vec<BiSeries> = Vec::new();
    let mut k = 1usize;
    while 2 * k + 1 <= t {
        let alpha = alpha_even_exact(k);
        let pow4 = rat(1 << (2 * k), 1);
        let mut p = BiSeries::zero(t, t);
        for n in 0..=t.saturating_sub(2 * k) {
            let c = binom_rat((2 * k + n - 1) as i64, n as u32) * &pow4;
            *p.at_mut(2 * k, n) = alpha.scale(&c);
        }
        prefs.push(p);
        k += 1;
    }

    // lambda(z) = z - log(1 + G z) + sum_k pref_k {(1 + G z)^{-2k} - 1}.
    let zt = depth.max(1);
    let mut lam = ZSeries::zero(zt, t, t);
    lam.c[1] = BiSeries::one(t, t);
    let mut g_pow = BiSeries::one(t, t);
    for i in 1..=zt {
        g_pow = g_pow.mul(&g);
        if g_pow.is_zero() {
            break;
        }
        // -log(1+Gz) contributes -(-1)^{i-1}/i G^i = (-1)^i / i G^i at z^i.
        let sign: i64 = if i % 2 == 0 { 1 } else { -1 };
        lam.c[i] = lam.c[i].add(&g_pow.scale_rat(&rat(sign, i as i64)));
        // (1+Gz)^{-2k} - 1 contributes (-1)^i C(2k+i-1, i) G^i at z^i.
        for (kk, pref) in prefs.iter().enumerate() {
            let two_k = 2 * (kk + 1);
            let c = binom_rat((two_k + i - 1) as i64, i as u32) * rat(sign, 1);
            lam.c[i] = lam.c[i].add(&pref.mul(&g_pow).scale_rat(&c));
        }
    }

    // Denominator e^{-2z} - 1 - 2 sigma lambda(z); its z-constant vanishes,
    // and after factoring z the unit constant is -2.
    let mut two_sigma = BiSeries::zero(t, t);
    if t >= 1 {
        *two_sigma.at_mut(1, 0) = SymPoly::from_int(2);
    }
    let mut den = ZSeries::zero(zt, t, t);
    let mut fact = BigRational::one();
    for i in 1..=zt {
        fact *= BigRational::from_integer(BigInt::from(i as i64));
        let signed_pow = if i % 2 == 0 { 1i64 << i } else { -(1i64 << i) };
        let c = rat(signed_pow, 1) / &fact;
        den.c[i] = BiSeries::constant(t, t, SymPoly::from_rational(c));
    }
    for i in 0..=zt {
        den.c[i] = den.c[i].sub(&two_sigma.mul(&lam.c[i]));
    }
    assert!(den.c[0].is_zero(), "denominator must vanish at z = 0");

    // f = z / den = 1 / E with E the shifted denominator.
    let mut e = ZSeries::zero(zt, t, t);
    for i in 0..zt {
        e.c[i] = den.c[i + 1].clone();
    }
    let f = e.recip();

    // Lagrange inversion: h = sum_k c_k w^k with c_k = (1/k) [z^{k-1}] f^k.
    let mut h = BiSeries::zero(t, t);
    let mut f_pow = f.clone();
    let mut w_pow = w.clone();
    for k in 1..=depth {
        if k > 1 {
            f_pow = f_pow.mul(&f);
            w_pow = w_pow.mul(&w);
        }
        let ck = f_pow.c[k - 1].scale_rat(&rat(1, k as i64));
        h = h.add(&ck.mul(&w_pow));
    }
    assert!(h.coeff(0, 0).is_zero(), "h must vanish at the origin");
    h.exp()
}

/// The a_{l,j} table: tau = (X - Lambda) sigma turns the (sigma, tau) series
/// e^{h} into polynomials in X, binomially redistributing each tau power.
fn a_table(depth: usize) -> Vec<Vec<SymPoly>> {
    let eh = exp_h_series(depth);
    let neg_lambda = SymPoly::lambda().neg();
    let mut table = Vec::with_capacity(depth + 1);
    for j in 0..=depth {
        let mut row = Vec::with_capacity(j + 1);
        for l in 0..=j {
            let mut acc = SymPoly::zero();
            for n in l..=j {
                let c = binom_rat(n as i64, l as u32);
                let term = eh.coeff(j - n, n).mul(&neg_lambda.pow((n - l) as u32)).scale(&c);
                acc = acc.add(&term);
            }
            row.push(acc);
        }
        table.push(row);
    }
    table
}

/// Maximum implemented cascade depth.
pub const CASCADE_DEPTH_MAX: usize = 6;

fn check_depth(j_max: usize) {
    assert!(
        j_max <= CASCADE_DEPTH_MAX,
        "cascade depth {j_max} beyond the implemented bound {CASCADE_DEPTH_MAX}"
    );
}

/// R_0 .. R_{j_max}, exact.
pub fn cascade_r(j_max: usize) -> PolyFamily {
    check_depth(j_max);
    PolyFamily { family: Family::R, polys: a_table(j_max) }
}

/// P_0 .. P_{j_max}, exact.
pub fn cascade_p(j_max: usize) -> PolyFamily {
    check_depth(j_max);
    let t = j_max;
    let a = a_table(t);

    // A = sum_j R_j(X) sigma^j as a series in (sigma, X).
    let mut abig = BiSeries::zero(t, t);
    for (j, row) in a.iter().enumerate() {
        for (l, c) in row.iter().enumerate() {
            *abig.at_mut(j, l) = c.clone();
        }
    }
    let one = BiSeries::one(t, t);
    let mut sigma = BiSeries::zero(t, t);
    let mut x_var = BiSeries::zero(t, t);
    if t >= 1 {
        *sigma.at_mut(1, 0) = SymPoly::one();
        *x_var.at_mut(0, 1) = SymPoly::one();
    }
    let lambda_c = BiSeries::constant(t, t, SymPoly::lambda());

    // kappa = 2 sigma log rho - 1 = sigma (Lambda - X) + 2 sigma log A,
    // since 2 sigma log mu = 1 - tau and rho = mu A.
    let kappa = sigma
        .mul(&lambda_c.sub(&x_var))
        .add(&sigma.scale_rat(&rat(2, 1)).mul(&abig.sub(&one).log1p()));
    let one_plus_kappa = one.add(&kappa);
    // kappa_star = loglog rho = X - Lambda + log(1 + kappa).
    let kappa_star = x_var.sub(&lambda_c).add(&kappa.log1p());
    // 1 / log rho = 2 sigma / (1 + kappa).
    let inv_log_rho = sigma.scale_rat(&rat(2, 1)).mul(&one_plus_kappa.recip());

    // Bracket: 1 - kappa_star / log rho + sum_n fraka_{1;n} (log rho)^{-n}.
    let mut bracket = one.sub(&kappa_star.mul(&inv_log_rho));
    let mut pw = one.clone();
    for n in 1..=t {
        pw = pw.mul(&inv_log_rho);
        bracket = bracket.add(&pw.scale_sym(&fraka1(n)));
    }

    let z = abig.mul(&one_plus_kappa).mul(&bracket);
    let mut polys = Vec::with_capacity(t + 1);
    for j in 0..=t {
        for l in (j + 1)..=t {
            assert!(
                z.coeff(j, l).is_zero(),
                "X-degree above sigma-degree must cancel: ({j}, {l}) = {}",
                z.coeff(j, l)
            );
        }
        polys.push((0..=j).map(|l| z.coeff(j, l).clone()).collect());
    }
    PolyFamily { family: Family::P, polys }
}

/// A_n from the recurrence A_1 = 3/2,
/// A_n = (1/2) sum_{2<=j<=n} (-1)^j (j+1) [tau^n] (sum_d A_d tau^d)^j,
/// which closed-form equals (3/4)^n C(2n, n).
pub fn lagrange_an(n_max: usize) -> Vec<BigRational> {
    assert!(n_max >= 1);
    let mut a = vec![BigRational::zero(); n_max + 1];
    a[1] = rat(3, 2);
    for n in 2..=n_max {
        // A_n itself cannot reach [tau^n] in any power j >= 2, so earlier
        // values suffice.
        let s: Vec<BigRational> = (0..=n)
            .map(|d| if (1..n).contains(&d) { a[d].clone() } else { BigRational::zero() })
            .collect();
        let mut pw = s.clone();
        let mut total = BigRational::zero();
        for j in 2..=n {
            pw = conv_trunc(&pw, &s, n);
            let signed = if j % 2 == 0 { j as i64 + 1 } else { -(j as i64 + 1) };
            total += rat(signed, 1) * &pw[n];
        }
        a[n] = total * rat(1, 2);
    }
    a
}

fn conv_trunc(a: &[BigRational], b: &[BigRational], deg: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); deg + 1];
    for (i, ai) in a.iter().enumerate().take(deg + 1) {
        if ai.is_zero() {
            continue;
        }
        for (k, bk) in b.iter().enumerate().take(deg + 1 - i) {
            if !bk.is_zero() {
                out[i + k] += ai * bk;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::binomial;

    fn lam_pow(k: u32) -> SymPoly {
        SymPoly::lambda().pow(k)
    }

    fn x_poly(terms: &[(usize, SymPoly)]) -> Vec<SymPoly> {
        let deg = terms.iter().map(|&(l, _)| l).max().unwrap();
        let mut v = vec![SymPoly::zero(); deg + 1];
        for (l, c) in terms {
            v[*l] = v[*l].add(c);
        }
        v
    }

    #[test]
    fn r_polynomial_golden_values() {
        // Written in Y = X - Lambda the low orders are
        //   R_0 = 1, R_1 = (3/2) Y, R_2 = (27/8) Y^2 - (5/2) Y,
        //   R_3 = (135/16) Y^3 - 14 Y^2 + (11/2) Y - (2/3) Pi.
        // R_3 is anchored by two independent checks: the (log v)^{-2}
        // coefficient of the saddle integral expansion is Pi/6 (the odd
        // eta terms cancel between the two half-range integrals, the even
        // ones double), and the numerical saddle solution of v^2 I(v) = xi
        // matches sqrt(2 xi / log xi) sum_j R_j sigma^j with residuals
        // collapsing at sigma^{J+1} rate through J = 5 over v = 1e10..1e80.
        let fam = cascade_r(3);
        assert_eq!(fam.polys[0], vec![SymPoly::one()]);
        // R_1 = (3/2) X - (3/2) L.
        let r1 = x_poly(&[
            (1, SymPoly::ratio(3, 2)),
            (0, lam_pow(1).scale(&rat(-3, 2))),
        ]);
        assert_eq!(fam.polys[1], r1);
        // R_2 = (27/8) X^2 - ((27/4) L + 5/2) X + (27/8) L^2 + (5/2) L.
        let r2 = x_poly(&[
            (2, SymPoly::ratio(27, 8)),
            (1, lam_pow(1).scale(&rat(-27, 4)).add(&SymPoly::ratio(-5, 2))),
            (0, lam_pow(2).scale(&rat(27, 8)).add(&lam_pow(1).scale(&rat(5, 2)))),
        ]);
        assert_eq!(fam.polys[2], r2);
        // R_3 = (135/16) X^3 - ((405/16) L + 14) X^2
        //     + ((405/16) L^2 + 28 L + 11/2) X
        //     - (135/16) L^3 - 14 L^2 - (11/2) L - (2/3) Pi.
        let r3 = x_poly(&[
            (3, SymPoly::ratio(135, 16)),
            (2, lam_pow(1).scale(&rat(-405, 16)).add(&SymPoly::from_int(-14))),
            (
                1,
                lam_pow(2)
                    .scale(&rat(405, 16))
                    .add(&lam_pow(1).scale(&rat(28, 1)))
                    .add(&SymPoly::ratio(11, 2)),
            ),
            (
                0,
                lam_pow(3)
                    .scale(&rat(-135, 16))
                    .add(&lam_pow(2).scale(&rat(-14, 1)))
                    .add(&lam_pow(1).scale(&rat(-11, 2)))
                    .add(&SymPoly::term(0, 1, rat(-2, 3))),
            ),
        ]);
        assert_eq!(fam.polys[3], r3);
    }

    #[test]
    fn p_polynomial_golden_values() {
        // In Y = X - Lambda:
        //   P_0 = 1, P_1 = -(3/2) Y - 1, P_2 = -(9/8) Y^2 + Y + 2,
        //   P_3 = -(27/16) Y^3 + (25/8) Y^2 + 2 Y + 4 + (2/3) Pi.
        // Anchored numerically: with log F's bracket coefficients
        // gamma_m + beta_m and xi := v^2 I(v), the composition
        // (log F(v) + xi/v - v) / sqrt(2 xi log xi) matches
        // sum_j P_j sigma^j with sigma^{J+1}-rate residual collapse.
        let fam = cascade_p(3);
        assert_eq!(fam.polys[0], vec![SymPoly::one()]);
        // P_1 = -(3/2) X + (3/2) L - 1.
        let p1 = x_poly(&[
            (1, SymPoly::ratio(-3, 2)),
            (0, lam_pow(1).scale(&rat(3, 2)).add(&SymPoly::from_int(-1))),
        ]);
        assert_eq!(fam.polys[1], p1);
        // P_2 = -(9/8) X^2 + ((9/4) L + 1) X - (9/8) L^2 - L + 2.
        let p2 = x_poly(&[
            (2, SymPoly::ratio(-9, 8)),
            (1, lam_pow(1).scale(&rat(9, 4)).add(&SymPoly::one())),
            (
                0,
                lam_pow(2)
                    .scale(&rat(-9, 8))
                    .add(&lam_pow(1).neg())
                    .add(&SymPoly::from_int(2)),
            ),
        ]);
        assert_eq!(fam.polys[2], p2);
        // P_3 = -(27/16) X^3 + ((81/16) L + 25/8) X^2
        //     - ((81/16) L^2 + (25/4) L - 2) X
        //     + (27/16) L^3 + (25/8) L^2 - 2 L + 4 + (2/3) Pi.
        let p3 = x_poly(&[
            (3, SymPoly::ratio(-27, 16)),
            (2, lam_pow(1).scale(&rat(81, 16)).add(&SymPoly::ratio(25, 8))),
            (
                1,
                lam_pow(2)
                    .scale(&rat(-81, 16))
                    .add(&lam_pow(1).scale(&rat(-25, 4)))
                    .add(&SymPoly::from_int(2)),
            ),
            (
                0,
                lam_pow(3)
                    .scale(&rat(27, 16))
                    .add(&lam_pow(2).scale(&rat(25, 8)))
                    .add(&lam_pow(1).scale(&rat(-2, 1)))
                    .add(&SymPoly::from_int(4))
                    .add(&SymPoly::term(0, 1, rat(2, 3))),
            ),
        ]);
        assert_eq!(fam.polys[3], p3);
    }

    #[test]
    fn r_diagonal_is_scaled_central_binomial() {
        let fam = cascade_r(6);
        for j in 1..=6usize {
            let want = rat(3, 4).pow(j as i32)
                * BigRational::from_integer(binomial(BigInt::from(2 * j), BigInt::from(j)));
            assert_eq!(
                fam.polys[j][j].as_rational().expect("diagonal must be rational"),
                want,
                "j = {j}"
            );
        }
    }

    #[test]
    fn p_diagonal_relation() {
        let r = cascade_r(6);
        let p = cascade_p(6);
        for j in 1..=6usize {
            let a_jj = r.polys[j][j].as_rational().unwrap();
            let a_prev = r.polys[j - 1][j - 1].as_rational().unwrap();
            let want = a_jj - rat(3, 1) * a_prev;
            assert_eq!(p.polys[j][j].as_rational().unwrap(), want, "j = {j}");
            // And the closed form C(2j, j) 3^j / (4^j (1 - 2j)).
            let closed = BigRational::from_integer(binomial(BigInt::from(2 * j), BigInt::from(j)))
                * rat(3, 4).pow(j as i32)
                / rat(1 - 2 * j as i64, 1);
            assert_eq!(p.polys[j][j].as_rational().unwrap(), closed, "closed form j = {j}");
        }
    }

    #[test]
    fn an_recurrence_matches_closed_form() {
        let a = lagrange_an(30);
        for n in 1..=30usize {
            let want = rat(3, 4).pow(n as i32)
                * BigRational::from_integer(binomial(BigInt::from(2 * n), BigInt::from(n)));
            assert_eq!(a[n], want, "n = {n}");
        }
    }

    #[test]
    fn json_dump_shape() {
        let fam = cascade_r(2);
        let dump = fam.to_json();
        assert_eq!(dump.len(), 3);
        assert_eq!(dump[1].family, "R");
        assert_eq!(dump[1].j, 1);
        // R_1 has two monomials: (3/2) X and -(3/2) Lambda.
        assert_eq!(dump[1].coefficients.len(), 2);
        let text = serde_json::to_string(&dump[1]).unwrap();
        assert!(text.contains("\"degX\""), "{text}");
        assert!(text.contains("\"degLambda\""), "{text}");
    }
}

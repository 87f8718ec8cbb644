//! Exact enumerative quantities: the middle-prime reciprocal sum with its
//! parity split and local law, counts of rough integers stratified by the
//! number of distinct factors, power sums over rough integers, and the
//! truncated smooth series that inverts the finite product.

use crate::dd::Dd;
use crate::primes::sieve_upto;
use crate::products::TailBound;
use crate::sieve::{for_each_factored, SegmentConfig, SieveError};
use crate::CountMode;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Sorted factorization of `n`; the empty sequence for `n = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn smallest_prime(&self) -> Option<u64> {
        self.factors.first().map(|&(p, _)| p)
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }
}

/// Trial-division factorization; independent of the segmented driver, so the
/// two can serve as oracles for each other.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "0 has no factorization");
    let mut m = n;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Factorization { n, factors }
}

/// The middle prime factor: entry `ceil(k/2)` (1-indexed) of the ascending
/// factor sequence, where `k` and the sequence count distinct primes in
/// `Omega` mode and keep multiplicity in `BigOmega` mode. `None` for `n = 1`.
pub fn middle_prime(f: &Factorization, mode: CountMode) -> Option<u64> {
    if f.factors.is_empty() {
        return None;
    }
    let k: u64 = match mode {
        CountMode::Omega => f.factors.len() as u64,
        CountMode::BigOmega => f.factors.iter().map(|&(_, e)| e as u64).sum(),
    };
    let mut need = (k + 1) / 2;
    for &(p, e) in &f.factors {
        let width = match mode {
            CountMode::Omega => 1,
            CountMode::BigOmega => e as u64,
        };
        if need <= width {
            return Some(p);
        }
        need -= width;
    }
    unreachable!("countdown exhausts within the factor list")
}

pub(crate) fn middle_from_slices(primes: &[u64], exps: &[u8], mode: CountMode) -> (u64, u64) {
    let k: u64 = match mode {
        CountMode::Omega => primes.len() as u64,
        CountMode::BigOmega => exps.iter().map(|&e| e as u64).sum(),
    };
    let mut need = (k + 1) / 2;
    for (&p, &e) in primes.iter().zip(exps) {
        let width = match mode {
            CountMode::Omega => 1,
            CountMode::BigOmega => e as u64,
        };
        if need <= width {
            return (p, k);
        }
        need -= width;
    }
    unreachable!("countdown exhausts within the factor list")
}

/// Exact evaluation of the middle-prime reciprocal sum over `2 <= n <= x`.
///
/// `total` is the final sum `odd_part + even_part`, where the parts split the
/// contribution by the parity of the factor count `nu(n)`; `local_law` maps
/// each attained middle prime `p` to the count of `n` with that middle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactSumReport {
    pub x: f64,
    pub mode: CountMode,
    pub total: f64,
    pub odd_part: f64,
    pub even_part: f64,
    #[serde(with = "law_pairs")]
    pub local_law: BTreeMap<u64, u64>,
}

mod law_pairs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(law: &BTreeMap<u64, u64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(law.iter().map(|(&p, &c)| (p, c)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u64, u64>, D::Error> {
        Ok(Vec::<(u64, u64)>::deserialize(d)?.into_iter().collect())
    }
}

pub fn exact_sum(x: f64, mode: CountMode) -> Result<ExactSumReport, SieveError> {
    exact_sum_with(x, mode, &SegmentConfig::default())
}

/// Segmented enumeration with compensated per-parity accumulators; segments
/// are merged in ascending order, so totals are deterministic.
pub fn exact_sum_with(
    x: f64,
    mode: CountMode,
    config: &SegmentConfig,
) -> Result<ExactSumReport, SieveError> {
    assert!(x >= 2.0, "the sum starts at n = 2");
    let mut odd = Dd::ZERO;
    let mut even = Dd::ZERO;
    let mut law: BTreeMap<u64, u64> = BTreeMap::new();
    for_each_factored(x, config, |_n, primes, exps| {
        let (mid, k) = middle_from_slices(primes, exps, mode);
        let term = 1.0 / mid as f64;
        if k % 2 == 1 {
            odd = odd.add_f64(term);
        } else {
            even = even.add_f64(term);
        }
        *law.entry(mid).or_insert(0) += 1;
    })?;
    let odd_part = odd.to_f64();
    let even_part = even.to_f64();
    Ok(ExactSumReport {
        x,
        mode,
        total: odd_part + even_part,
        odd_part,
        even_part,
        local_law: law,
    })
}

/// Count of `n <= x` whose middle prime is exactly `p`.
pub fn local_law(x: f64, p: u64, mode: CountMode) -> Result<u64, SieveError> {
    Ok(exact_sum(x, mode)?
        .local_law
        .get(&p)
        .copied()
        .unwrap_or(0))
}

/// Count of `n <= x` with all prime factors strictly above `y` and exactly
/// `k` distinct primes.
pub fn phi_k_exact(x: f64, y: f64, k: u32) -> u64 {
    assert!(x >= 1.0 && y >= 1.0 && k >= 1);
    let mut count = 0u64;
    for_each_factored(x, &SegmentConfig::default(), |_n, primes, _exps| {
        if primes.len() as u32 == k && primes[0] as f64 > y {
            count += 1;
        }
    })
    .expect("count stays within the enumeration budget");
    count
}

/// `sum of z^Omega(m)` over `m <= x` with smallest factor at least `y`;
/// `m = 1` participates as the empty product (`P^-(1) = +infinity`,
/// `Omega(1) = 0`, and `z^0 = 1` even at `z = 0`).
pub fn rough_power_sum_exact(x: f64, y: f64, z: Complex64) -> Complex64 {
    assert!(x >= 1.0 && y >= 2.0);
    assert!(z.norm() < 2.0, "power sum needs |z| < 2");
    let mut re = Dd::ZERO.add_f64(1.0);
    let mut im = Dd::ZERO;
    for_each_factored(x, &SegmentConfig::default(), |_n, primes, exps| {
        if (primes[0] as f64) < y {
            return;
        }
        let om: u32 = exps.iter().map(|&e| e as u32).sum();
        let w = z.powu(om);
        re = re.add_f64(w.re);
        im = im.add_f64(w.im);
    })
    .expect("power sum stays within the enumeration budget");
    Complex64::new(re.to_f64(), im.to_f64())
}

/// Truncated smooth series `sum of z^{-Omega(m)} / m` over `y`-smooth `m`
/// with `Omega(m) <= 3 xi / 2`, `xi = log log x`. The enumeration cuts at
/// `m <= 10^12` (shrinking if the term count explodes) and certifies what it
/// dropped: `abs_tail` bounds the omitted `m > cutoff` by a Rankin-style
/// argument, so the value-and-tail pair is an explicit truncation report.
/// As `x` grows this tends to `1 / F(y, 1/z)` (with-multiplicity mode).
pub fn lambda_big_omega_exact(x: f64, y: f64, z: Complex64) -> TailBound {
    let lx = x.ln();
    assert!(y >= 2.0 && y <= lx, "cutoff must sit between 2 and log x");
    let r = z.norm().recip();
    assert!(r < 2.0, "series needs |z| > 1/2");
    let xi = lx.ln();
    let omega_cap = (1.5 * xi).floor() as u32;
    let primes = sieve_upto(y.floor() as u64);

    const TERM_BUDGET: usize = 1 << 25;
    let mut m_cut = 1.0e12f64;
    let mut terms: Vec<(f64, u32)> = Vec::new();
    loop {
        terms.clear();
        if enumerate_smooth(&primes, 0, 1.0, 0, m_cut, omega_cap, &mut terms) {
            break;
        }
        m_cut /= 16.0;
    }

    // Descending m sums the small reciprocals first, deterministically.
    terms.sort_unstable_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let zi = z.finv();
    // Sized by the largest factor count actually enumerated, so an
    // effectively unbounded omega_cap (x at or beyond f64 range evaluates
    // the uncapped limit object) costs nothing.
    let max_omega = terms.iter().map(|&(_, om)| om).max().unwrap_or(0);
    let mut powers = vec![Complex64::new(1.0, 0.0); max_omega as usize + 1];
    for k in 1..powers.len() {
        powers[k] = powers[k - 1] * zi;
    }
    let mut re = Dd::ZERO;
    let mut im = Dd::ZERO;
    for &(m, om) in &terms {
        let w = powers[om as usize] / m;
        re = re.add_f64(w.re);
        im = im.add_f64(w.im);
    }
    let value = Complex64::new(re.to_f64(), im.to_f64());

    // Rankin bound on the dropped m > m_cut: for any 0 < delta < 1 with
    // r q^{delta-1} < 1 at every q <= y, the dropped mass is at most
    // m_cut^{-delta} prod (1 - r q^{delta-1})^{-1}.
    let mut tail = f64::INFINITY;
    for step in 1..20 {
        let delta = step as f64 / 20.0;
        let mut product = m_cut.powf(-delta);
        for &q in &primes {
            let w = r * (q as f64).powf(delta - 1.0);
            if w >= 1.0 {
                product = f64::INFINITY;
                break;
            }
            product /= 1.0 - w;
        }
        tail = tail.min(product);
    }

    fn enumerate_smooth(
        primes: &[u64],
        idx: usize,
        m: f64,
        omega: u32,
        cap: f64,
        omega_cap: u32,
        out: &mut Vec<(f64, u32)>,
    ) -> bool {
        if idx == primes.len() {
            if out.len() == out.capacity() && out.len() >= TERM_BUDGET {
                return false;
            }
            out.push((m, omega));
            return out.len() <= TERM_BUDGET;
        }
        if !enumerate_smooth(primes, idx + 1, m, omega, cap, omega_cap, out) {
            return false;
        }
        let q = primes[idx] as f64;
        let mut b = m * q;
        let mut added = omega + 1;
        while b <= cap && added <= omega_cap {
            if !enumerate_smooth(primes, idx + 1, b, added, cap, omega_cap, out) {
                return false;
            }
            b *= q;
            added += 1;
        }
        true
    }

    TailBound {
        value,
        abs_tail: tail + value.norm() * 1e-14,
    }
}

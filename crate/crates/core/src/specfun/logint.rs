//! Truncated expansions of the two logarithmic integrals used by tail and
//! head estimates, each paired with its exact Ei form for cross-checking:
//!
//!   int_v^inf dt / (t^m log t)  = -Ei((1-m) log v)
//!   int_2^v  t^n dt / log t     =  Ei((n+1) log v) - Ei((n+1) log 2)

use super::ei::ei;

#[derive(Debug, Clone, Copy)]
pub struct ExpansionPair {
    pub expansion: f64,
    pub exact: f64,
}

/// Tail integral int_v^inf dt/(t^m log t) for v > 1, m > 1:
/// (1/v^{m-1}) sum_{j=1..J} (-1)^{j+1} (j-1)! / ((m-1) log v)^j, with the
/// next-term magnitude J! / ((m-1) log v)^{J+1} * v^{1-m} as the error scale.
pub fn log_integral_tail(v: f64, m: f64, terms: u32) -> ExpansionPair {
    assert!(v > 1.0 && m > 1.0 && terms >= 1, "domain: v > 1, m > 1, J >= 1");
    let lv = v.ln();
    let base = 1.0 / ((m - 1.0) * lv);
    let mut sum = 0.0;
    let mut term = base;
    for j in 1..=terms {
        sum += term;
        // (-1)^{j+1} (j-1)! pattern: next term = -term * j * base.
        term *= -(j as f64) * base;
    }
    let expansion = v.powf(1.0 - m) * sum;
    let exact = -ei((1.0 - m) * lv);
    ExpansionPair { expansion, exact }
}

/// Head integral int_2^v t^n dt / log t for v > 2, n > -1:
/// sum_{j=1..J} v^{n+1} (j-1)! / ((n+1) log v)^j minus the head correction
/// 2^{n+1} / ((n+1) log 2).
pub fn log_integral_head(v: f64, n: f64, terms: u32) -> ExpansionPair {
    assert!(v > 2.0 && n > -1.0 && terms >= 1, "domain: v > 2, n > -1, J >= 1");
    let lv = v.ln();
    let base = 1.0 / ((n + 1.0) * lv);
    let mut sum = 0.0;
    let mut term = base;
    for j in 1..=terms {
        sum += term;
        term *= j as f64 * base;
    }
    let head = 2f64.powf(n + 1.0) / ((n + 1.0) * std::f64::consts::LN_2);
    let expansion = v.powf(n + 1.0) * sum - head;
    let exact = ei((n + 1.0) * lv) - ei((n + 1.0) * 2f64.ln());
    ExpansionPair { expansion, exact }
}

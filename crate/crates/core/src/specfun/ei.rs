//! Exponential integral Ei (Cauchy principal value) and the logarithmic
//! integrals li(v) = Ei(log v) and Li(v) = li(v) - li(2).

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Ei(v) for v != 0. Relative accuracy ~1e-12 over |v| <= 700; larger
/// positive arguments overflow to +inf together with e^v itself.
///
/// Power series on [-1, 40] (no damaging cancellation there), a modified
/// Lentz continued fraction for v < -1, and the optimally truncated
/// asymptotic series e^v/v * sum k!/v^k beyond 40.
pub fn ei(v: f64) -> f64 {
    assert!(v != 0.0 && v.is_finite(), "ei domain: v != 0, got {v}");
    if v > 40.0 {
        ei_asymptotic(v)
    } else if v >= -1.0 {
        ei_series(v)
    } else {
        -e1_continued_fraction(-v)
    }
}

fn ei_series(v: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for n in 1..=200 {
        term *= v / n as f64;
        let add = term / n as f64;
        sum += add;
        if add.abs() < 1e-17 * sum.abs().max(1.0) {
            break;
        }
    }
    EULER_GAMMA + v.abs().ln() + sum
}

fn ei_asymptotic(v: f64) -> f64 {
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    for k in 1..200 {
        let next = term * k as f64 / v;
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    v.exp() / v * sum
}

/// E1(x) for x >= 1 via the even continued fraction, modified Lentz iteration.
fn e1_continued_fraction(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..200 {
        let a = -(i as f64) * (i as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-15 {
            break;
        }
    }
    h * (-x).exp()
}

/// li(v) = Ei(log v), principal value; v > 0, v != 1.
pub fn li(v: f64) -> f64 {
    assert!(v > 0.0 && v != 1.0, "li domain: v > 0, v != 1, got {v}");
    ei(v.ln())
}

/// Li(v) = li(v) - li(2), the integral of dt/log t from 2 to v.
pub fn li_offset(v: f64) -> f64 {
    li(v) - li(2.0)
}
